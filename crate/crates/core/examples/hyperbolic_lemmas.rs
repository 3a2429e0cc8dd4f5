//! Hyperbolic distance and the coefficient-type distortion bounds for `h'` and `||D_f||`.

use harmonic_john::hyperbolic::{
    check_lemma23, check_lemma_b, check_two_point_sharp, hyperbolic_distance, lemma24_constant, AlphaConfig,
};
use harmonic_john::{catalog_get, Params, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let origin = Complex64::new(0.0, 0.0);
    for r in [0.5, 0.9, 0.99, 1.0 - 1e-12] {
        println!("lambda(0, {r}) = {:.12}", hyperbolic_distance(origin, Complex64::new(r, 0.0))?);
    }

    let alpha = AlphaConfig::default();
    let koebe = catalog_get("analytic", &Params::default().with("expr", "koebe"))?;
    let samples: Vec<Complex64> = (1..10).map(|k| Complex64::from_polar(1.0 - 0.5f64.powi(k), 0.3 * k as f64)).collect();
    let b = check_lemma_b(&koebe, alpha, &samples)?;
    println!("\nKoebe |h'| bounds: min lower margin {:.3e}", b.iter().map(|r| r.lower).fold(f64::INFINITY, f64::min));

    let pairs = [(origin, Complex64::new(0.95, 0.0)), (Complex64::new(0.5, 0.5), Complex64::new(-0.3, 0.1))];
    let printed = check_lemma23(&koebe, alpha, &pairs)?;
    let sharp = check_two_point_sharp(&koebe, alpha, &pairs)?;
    for (p, s) in printed.iter().zip(&sharp) {
        println!(
            "pair {:?} -> {:?}: exponent 1+a pass = {:<5}  exponent 2(1+a) pass = {}",
            p.z1.0, p.z2.0, p.pass, s.pass
        );
    }

    println!("\nbox constant M(1, 2, 1) = {:.4}", lemma24_constant(1.0, 2.0, 1.0, alpha)?);
    Ok(())
}
