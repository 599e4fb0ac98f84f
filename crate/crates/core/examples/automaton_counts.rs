//! Builds and minimises the automaton of a class, then checks its word counts
//! against RGFs generated directly.
//!
//! ```bash
//! cargo run --release --example automaton_counts -- "{1432, 2314}"
//! ```

use insertion_encoding::automaton::{build_dfa, counts, minimize, DEFAULT_STATE_CAP};
use insertion_encoding::cayley::generate_rgfs;
use insertion_encoding::{Basis, Encoding, Mode};

fn main() -> insertion_encoding::Result<()> {
    let basis: Basis = std::env::args().nth(1).as_deref().unwrap_or("{121, 1123}").parse()?;
    for encoding in [Encoding::Vertical, Encoding::Horizontal] {
        let dfa = match build_dfa(&basis, encoding, Mode::Rgf, DEFAULT_STATE_CAP) {
            Ok(d) => minimize(&d),
            Err(e) => {
                println!("{encoding}: {e}");
                continue;
            }
        };
        let from_dfa = counts(&dfa, 9).split_off(1);
        let direct: Vec<usize> = (1..=9).map(|n| generate_rgfs(n, &basis).map(|v| v.len())).collect::<Result<_, _>>()?;
        println!(
            "{encoding}: {} states, {} transitions, slot bound {}",
            dfa.state_count(),
            dfa.transition_count(),
            dfa.slot_bound
        );
        println!("  sizes 1..=9");
        println!("  automaton {}", join(&from_dfa));
        println!("  direct    {}", join(&direct));
        assert!(from_dfa.iter().zip(&direct).all(|(a, b)| a == &(*b).into()));
    }
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
