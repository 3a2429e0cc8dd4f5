//! Two-sided bracket for the Pommerenke-interior quantity on the reference maps.

use harmonic_john::john::{pommerenke_interior, JohnConfig};
use harmonic_john::mapcore::reference_set;
use harmonic_john::report::fmt_float;
use harmonic_john::Result;

fn main() -> Result<()> {
    let cfg = JohnConfig::default();
    for map in reference_set() {
        let b = pommerenke_interior(&map, &cfg.pommerenke_radii(), cfg.points_per_circle, &cfg.thresholds)?;
        println!("{:<24} [{}, {}]", map.label, fmt_float(b.lo), fmt_float(b.hi));
    }
    Ok(())
}
