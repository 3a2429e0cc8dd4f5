//! Weighted coefficient sums with dyadic-block convergence verdicts and the critical exponent.

use harmonic_john::hardy::{beta_critical, coefficient_sum, CoefficientTable};
use harmonic_john::mapcore::catalog::all_entries;
use harmonic_john::Result;

fn main() -> Result<()> {
    for map in all_entries() {
        let table = CoefficientTable::from_map(&map, 256)?;
        let verdicts: Vec<String> = [0.1, 0.5, 1.0]
            .iter()
            .map(|&b| {
                let s = coefficient_sum(&table, b);
                format!("{b}: {:.3e} {}", s.partial.last().unwrap().1, if s.convergent { "conv" } else { "div" })
            })
            .collect();
        println!("{:<28} {}  beta* = {:.3}", map.label, verdicts.join("  "), beta_critical(&table));
    }

    for s in [1.5, 2.0] {
        let t = CoefficientTable::from_fn(1 << 14, |n| (n as f64).powf(-s), |_| 0.0);
        println!("|a_n| = n^-{s}: beta* = {:.4} (block-rule limit {:.4})", beta_critical(&t), 2.0 * s - 2.0 + 0.9f64.log2());
    }
    Ok(())
}
