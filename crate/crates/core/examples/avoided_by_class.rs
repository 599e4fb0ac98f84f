//! Asks whether any member of a class contains a given pattern, and shows a
//! member that does when there is one.
//!
//! ```bash
//! cargo run --example avoided_by_class
//! ```

use insertion_encoding::regularity::class_member_containing;
use insertion_encoding::{Basis, CayleyPermutation};

fn main() -> insertion_encoding::Result<()> {
    let queries = [("12", "111"), ("21", "11"), ("123", "1212"), ("312", "121"), ("1123", "")];
    for (gamma, basis) in queries {
        let gamma: CayleyPermutation = gamma.parse()?;
        let basis: Basis = basis.parse()?;
        match class_member_containing(&gamma, &basis) {
            Some(member) => println!("Av{basis} contains {gamma}, e.g. in {member}"),
            None => println!("Av{basis} avoids {gamma}"),
        }
    }
    Ok(())
}
