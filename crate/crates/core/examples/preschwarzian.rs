//! Pre-Schwarzian boundary test, Schwarz-Pick slack of the dilatation and radial lengths.

use harmonic_john::john::dyadic_ladder;
use harmonic_john::schwarz::{rectifiability_check, schwarz_pick_check, schwarzian_data, theorem16_limsup};
use harmonic_john::{catalog_get, Params, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let koebe = catalog_get("analytic", &Params::default().with("expr", "koebe"))?;
    let d = schwarzian_data(&koebe, Complex64::new(0.0, 0.0))?;
    println!("Koebe at 0: P_f = {}, S_f = {}", d.pf, d.sf);

    let radii = [0.5, 0.9, 0.99, 0.999];
    for (name, params) in [
        ("shear_omega_bz", Params::from_pairs([("b", 1.0)])),
        ("analytic", Params::default().with("expr", "koebe")),
        ("analytic", Params::default().with("expr", "lune")),
        ("analytic", Params::default().with("expr", "cardioid")),
    ] {
        let f = catalog_get(name, &params)?;
        let est = theorem16_limsup(&f, &radii, 256, 0.05)?;
        let maxima: Vec<String> = est.maxima.iter().map(|m| format!("{:.4}", m.1)).collect();
        println!("{:<22} maxima {:?} -> estimate {:.4}, below 1 - 0.05: {}", f.label, maxima, est.estimate, est.pass);
    }

    let shear = catalog_get("shear_omega_bz", &Params::from_pairs([("b", 0.5)]))?;
    let pts: Vec<Complex64> = (1..8).map(|k| Complex64::from_polar(1.0 - 0.5f64.powi(k), k as f64)).collect();
    let slack = schwarz_pick_check(&shear, &pts)?;
    println!("\nshear(0.5) Schwarz-Pick slack: {:?}", slack.iter().map(|r| format!("{:.3}", r.upper)).collect::<Vec<_>>());

    let ladder = dyadic_ladder(14);
    let rays = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    for r in rectifiability_check(&koebe, &rays, &ladder[1..])? {
        println!("Koebe ray {:?}: length {:.3e}, finite: {}", r.ray.0, r.lengths.last().unwrap(), r.finite);
    }
    Ok(())
}
