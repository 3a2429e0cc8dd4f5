//! Derivative frames, the quasiconformality constant and the two-sided
//! distortion bound for harmonic self-maps of the disk.

use harmonic_john::frame::{check_theorem_a, frame_at, qc_constant, PolarGrid};
use harmonic_john::report::all_pass;
use harmonic_john::{catalog_get, Params, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let z = Complex64::new(-0.2, 0.5);
    for (name, params) in [
        ("identity", Params::default()),
        ("affine", Params::from_pairs([("a", 0.5)])),
        ("shear_omega_bz", Params::from_pairs([("b", 0.5)])),
        ("analytic", Params::default().with("expr", "cardioid")),
    ] {
        let f = catalog_get(name, &params)?;
        let fr = frame_at(&f, z)?;
        let k = qc_constant(&f, &PolarGrid::default_grid())?;
        println!(
            "{:<22} ||D|| = {:.6}  l(D) = {:.6}  J = {:.6}  K(z) = {:.6}  K = {:.6}",
            f.label,
            fr.opnorm,
            fr.lnorm,
            fr.jacobian,
            fr.local_k.unwrap_or(f64::NAN),
            k
        );
    }

    // disk automorphisms attain both sides of the bound with K = 1
    let auto = catalog_get("analytic", &Params::default().with("expr", "automorphism").with("a", 0.6))?;
    let pts = PolarGrid::uniform(16, 0.99, 32).points();
    let recs = check_theorem_a(&auto, 1.0, &pts, 1e-10)?;
    let worst = recs.iter().map(|r| r.lower.abs().max(r.upper.abs())).fold(0.0, f64::max);
    println!("\nautomorphism: {} samples, all pass = {}, largest |margin| = {worst:.2e}", recs.len(), all_pass(&recs));
    Ok(())
}
