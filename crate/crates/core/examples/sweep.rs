//! Classifies every basis of one or two patterns of size 3 into a JSON Lines
//! store, runs the sweep again from the warm store, and prints the table.
//!
//! ```bash
//! cargo run --release --example sweep
//! ```

use insertion_encoding::catalog::{sweep_table, Catalog, SweepSpec};

fn main() -> insertion_encoding::Result<()> {
    let path = std::env::temp_dir().join(format!("insenc-sweep-{}.jsonl", std::process::id()));
    let spec = SweepSpec { pattern_size: 3, basis_sizes: 1..=2, search_bound: 4, jobs: 0 };
    let cold = sweep_table(&mut Catalog::open(&path, false)?, &spec)?;
    let warm = sweep_table(&mut Catalog::open(&path, false)?, &spec)?;
    println!("classified {} records, then {} on the warm store", cold.classified, warm.classified);
    print!("{}", warm.to_text());
    std::fs::remove_file(&path)?;
    Ok(())
}
