//! Prints the rational generating function of several classes, computed from
//! their automata, with the first terms of its series.
//!
//! ```bash
//! cargo run --release --example generating_function
//! ```

use insertion_encoding::automaton::{build_dfa, minimize, DEFAULT_STATE_CAP};
use insertion_encoding::genfunc::gf_from_dfa;
use insertion_encoding::{Basis, Encoding, Mode};

fn main() -> insertion_encoding::Result<()> {
    let cases = [
        ("121", Encoding::Vertical, Mode::Rgf),
        ("112", Encoding::Vertical, Mode::Rgf),
        ("123", Encoding::Horizontal, Mode::Rgf),
        ("121", Encoding::Horizontal, Mode::Matching),
        ("{1212, 1221}", Encoding::Horizontal, Mode::Rgf),
    ];
    for (basis, encoding, mode) in cases {
        let basis: Basis = basis.parse()?;
        let gf = gf_from_dfa(&minimize(&build_dfa(&basis, encoding, mode, DEFAULT_STATE_CAP)?));
        let series: Vec<String> = gf.series(10)?.iter().map(ToString::to_string).collect();
        println!("{basis} {encoding} {mode}");
        println!("  {gf}");
        println!("  {}", gf.coefficient_form());
        println!("  {}", series.join(", "));
    }
    Ok(())
}
