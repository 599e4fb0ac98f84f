//! Encodes a few Cayley permutations with both insertion encodings and
//! decodes the words back.
//!
//! ```bash
//! cargo run --example encode_decode
//! ```

use insertion_encoding::encoding::horizontal::{decode_h, encode_h, format_word_h, max_slots_h};
use insertion_encoding::encoding::vertical::{decode_v, encode_v, format_word_v, max_slots_v};
use insertion_encoding::{CayleyPermutation, Mode};

fn main() -> insertion_encoding::Result<()> {
    for text in ["1213", "2131", "12312", "3122"] {
        let pi: CayleyPermutation = text.parse()?;
        let h = encode_h(&pi);
        let v = encode_v(&pi);
        println!("{pi}");
        println!("  horizontal {:<24} slots {}", format_word_h(&h), max_slots_h(&pi));
        println!("  vertical   {:<24} slots {}", format_word_v(&v), max_slots_v(&pi));
        assert_eq!(decode_h(&h, Mode::Cayley)?, pi);
        assert_eq!(decode_v(&v, Mode::Cayley)?, pi);
    }
    Ok(())
}
