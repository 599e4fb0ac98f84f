//! Decides, for every single pattern of size 3, whether the RGFs avoiding it
//! have a regular insertion encoding, and prints the family each verdict
//! rests on.
//!
//! ```bash
//! cargo run --example classify
//! ```

use insertion_encoding::cayley::generate_cayley;
use insertion_encoding::regularity::{classify, DEFAULT_SEARCH_BOUND};
use insertion_encoding::{Basis, Encoding, Mode};

fn main() -> insertion_encoding::Result<()> {
    println!("{:<8} {:<10} {:<10} reason", "basis", "vertical", "horizontal");
    for pattern in generate_cayley(3)? {
        let basis = Basis::new([pattern]);
        let v = classify(&basis, Encoding::Vertical, Mode::Rgf, DEFAULT_SEARCH_BOUND)?;
        let h = classify(&basis, Encoding::Horizontal, Mode::Rgf, DEFAULT_SEARCH_BOUND)?;
        let reason = v.reason().or(h.reason()).unwrap_or_default();
        println!("{:<8} {:<10} {:<10} {reason}", basis.to_string(), v.verdict.to_string(), h.verdict.to_string());
    }
    Ok(())
}
