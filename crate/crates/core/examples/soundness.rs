//! Checks that configurations merged into one automaton state have the same
//! accepted continuations, up to a depth.
//!
//! ```bash
//! cargo run --release --example soundness
//! ```

use insertion_encoding::automaton::check_state_soundness;
use insertion_encoding::{Basis, Encoding, Mode};

fn main() -> insertion_encoding::Result<()> {
    let cases = [("121", Encoding::Vertical, Mode::Rgf), ("123", Encoding::Horizontal, Mode::Rgf), ("{1212, 1221}", Encoding::Horizontal, Mode::Matching)];
    for (basis, encoding, mode) in cases {
        let basis: Basis = basis.parse()?;
        let r = check_state_soundness(&basis, encoding, mode, 5);
        println!(
            "{basis} {encoding} {mode}: {} configurations, {} states, {} pairs, {}",
            r.configurations,
            r.signatures,
            r.pairs_checked,
            r.counterexample.as_deref().unwrap_or("sound")
        );
    }
    Ok(())
}
