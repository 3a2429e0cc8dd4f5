//! Radial tail integrals `T(r)`, weighted tail energy `E(r)` and the scaled tail `S(r)`.

use harmonic_john::john::{dyadic_ladder, tail_diagnostics};
use harmonic_john::report::table_csv;
use harmonic_john::{catalog_get, Params, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let ladder = dyadic_ladder(12);
    for (name, params, m0) in [
        ("identity", Params::default(), 2.0),
        ("analytic", Params::default().with("expr", "cardioid"), 6.0),
    ] {
        let f = catalog_get(name, &params)?;
        let t = tail_diagnostics(&f, Complex64::new(1.0, 0.0), &ladder, m0, 1e-6)?;
        println!("{} (M0 = {m0}): T bound holds {}, S nonincreasing {}", f.label, t.t_bound_holds, t.s_nonincreasing);
        let rows: Vec<Vec<f64>> = t.rows.iter().map(|r| vec![r.r, r.t, r.e, r.s]).collect();
        print!("{}", table_csv(&["r", "T", "E", "S"], &rows));
    }
    Ok(())
}
