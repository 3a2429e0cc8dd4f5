//! John verdicts for the bounded reference maps.

use std::time::Instant;

use harmonic_john::john::{john_analysis, summary_line, JohnConfig};
use harmonic_john::mapcore::reference_set;

fn main() -> harmonic_john::Result<()> {
    let cfg = JohnConfig::default();
    for map in reference_set() {
        let t = Instant::now();
        let a = john_analysis(&map, &cfg)?;
        println!("{}  ({:.1}s, {} mesh vertices; half-depth c={:.4} M1={:.4})", summary_line(&a.report), t.elapsed().as_secs_f64(), a.geometry.len(), a.radial_half, a.box_half);
        println!("    c levels  {:?}", a.radial.levels.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
        println!("    M1 levels {:?}", a.box_sup.levels.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
        println!("    delta     {:?}", a.fit.delta_levels.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
        println!("    Mgamma    {:?}", a.pommerenke.per_radius.iter().map(|v| format!("{:.3}/{:.3}", v.1, v.2)).collect::<Vec<_>>());
    }
    Ok(())
}
