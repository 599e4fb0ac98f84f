//! Builds the alternations of every family used by the regularity criteria,
//! and checks that each lies in its family.
//!
//! ```bash
//! cargo run --example alternations
//! ```

use insertion_encoding::geometry::{alternation, concatenation, in_class, ClassTag};

fn main() -> insertion_encoding::Result<()> {
    let families = ClassTag::HORIZONTAL_FAMILIES.iter().chain(&ClassTag::VERTICAL_FAMILIES);
    for &tag in families {
        let alt = alternation(tag, 3)?;
        assert!(in_class(&alt, tag));
        let cat = concatenation(tag, 3).map_or_else(|_| "-".to_string(), |c| c.to_string());
        println!("{:<8} alternation {:<16} concatenation {:<16} rgf {}", tag.to_string(), alt.to_string(), cat, alt.is_rgf());
    }
    Ok(())
}
