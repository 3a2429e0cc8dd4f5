//! Integral means of `||D_f||`, Hardy norms over the ladder and the series identity
//! for the circle mean of `|h'|^2 + |g'|^2`.

use harmonic_john::hardy::{energy_field, frame_norm_field, hardy_norm, integral_mean, varphi_series};
use harmonic_john::john::{dyadic_ladder, Thresholds};
use harmonic_john::mapcore::catalog::all_entries;
use harmonic_john::report::fmt_float;
use harmonic_john::Result;

fn main() -> Result<()> {
    let ladder = dyadic_ladder(10);
    let th = Thresholds::default();
    for map in all_entries() {
        let norm = hardy_norm(frame_norm_field(&map), 1.0, &ladder[1..], &th)?;
        let r = 0.5;
        let series = varphi_series(&map, r)?;
        let mean = integral_mean(energy_field(&map), 1.0, r)?;
        println!(
            "{:<28} sup M_1 = {:<24}  phi(1/2): series {:.12} ({} terms), circle mean {:.12}",
            map.label,
            fmt_float(norm.value),
            series.value,
            series.terms,
            mean
        );
    }
    Ok(())
}
