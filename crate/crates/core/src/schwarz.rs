//! Harmonic pre-Schwarzian and Schwarzian derivatives, the boundary test
//! `limsup (1-|z|^2) Re(z P_f(z)) < 1`, radial rectifiability and the
//! Schwarz–Pick bound for the dilatation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_z, Error, Result};
use crate::geometry::cumulative_arclength;
use crate::mapcore::HarmonicMap;
use crate::report::{Complex, MarginRecord};

/// Second-order differential invariants of `f = h + conj(g)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzianData {
    /// `h''/h'`
    pub th: Complex64,
    /// `T_h' - T_h^2/2`
    pub sh: Complex64,
    pub pf: Complex64,
    pub sf: Complex64,
    pub omega: Complex64,
    pub omega1: Complex64,
    pub omega2: Complex64,
}

/// `P_f = T_h - omega' conj(omega)/(1-|omega|^2)` and
/// `S_f = S_h + conj(omega)/(1-|omega|^2) (T_h omega' - omega'') - 3/2 (omega' conj(omega)/(1-|omega|^2))^2`.
pub fn schwarzian_data(map: &HarmonicMap, z: Complex64) -> Result<SchwarzianData> {
    let (h, g) = map.jets(z)?;
    if h.d1 == Complex64::new(0.0, 0.0) {
        return Err(Error::CriticalPoint(fmt_z(z)));
    }
    let th = h.d2 / h.d1;
    let th1 = (h.d3 * h.d1 - h.d2 * h.d2) / (h.d1 * h.d1);
    let sh = th1 - 0.5 * th * th;
    let omega = g.d1 / h.d1;
    let det = 1.0 - omega.norm_sqr();
    if !(det > 0.0) {
        return Err(Error::DegenerateDilatation(fmt_z(z)));
    }
    // g' = omega h', differentiated twice
    let omega1 = (g.d2 - omega * h.d2) / h.d1;
    let omega2 = (g.d3 - 2.0 * omega1 * h.d2 - omega * h.d3) / h.d1;
    let q = omega1 * omega.conj() / det;
    let pf = th - q;
    let sf = sh + omega.conj() / det * (th * omega1 - omega2) - 1.5 * q * q;
    Ok(SchwarzianData { th, sh, pf, sf, omega, omega1, omega2 })
}

/// Circle maxima of `(1-r^2) Re(z P_f(z))` and the boundary verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimsupEstimate {
    /// `(r, max over the circle)`
    pub maxima: Vec<(f64, f64)>,
    /// Largest of the last three circle maxima.
    pub estimate: f64,
    pub margin: f64,
    /// `estimate < 1 - margin`
    pub pass: bool,
}

/// `max_theta (1-r^2) Re(z P_f(z))` on `|z| = r` with `angles` equispaced samples.
pub fn circle_maximum(map: &HarmonicMap, r: f64, angles: usize) -> Result<f64> {
    let vals: Vec<f64> = (0..angles)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
            schwarzian_data(map, z).map(|d| (1.0 - r * r) * (z * d.pf).re)
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Plateau estimate of `limsup_{|z|->1} (1-|z|^2) Re(z P_f(z))` over the radii.
pub fn theorem16_limsup(map: &HarmonicMap, radii: &[f64], angles: usize, margin: f64) -> Result<LimsupEstimate> {
    if radii.is_empty() || angles == 0 {
        return Err(Error::ParamOutOfRange("need at least one radius and one angle".into()));
    }
    let maxima: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| circle_maximum(map, r, angles).map(|m| (r, m)))
        .collect::<Result<_>>()?;
    let tail = &maxima[maxima.len().saturating_sub(3)..];
    let estimate = tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(LimsupEstimate { maxima, estimate, margin, pass: estimate < 1.0 - margin })
}

/// Radial lengths `l(f([0, r_k zeta]))` along one ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayLength {
    pub ray: Complex,
    pub lengths: Vec<f64>,
    pub finite: bool,
}

/// Largest ratio of consecutive length increments still read as convergent.
pub const INCREMENT_RATIO: f64 = 0.9;

/// Per ray: finite length iff the last three increments of `l(f([0, r_k zeta]))`
/// shrink by at least [`INCREMENT_RATIO`] each, or have already stopped.
pub fn rectifiability_check(map: &HarmonicMap, rays: &[Complex64], ladder: &[f64]) -> Result<Vec<RayLength>> {
    let mut full = Vec::with_capacity(ladder.len() + 1);
    if ladder.first() != Some(&0.0) {
        full.push(0.0);
    }
    full.extend_from_slice(ladder);
    rays.par_iter()
        .map(|&zeta| {
            let lengths = cumulative_arclength(map, zeta, &full)?;
            let inc: Vec<f64> = lengths.windows(2).map(|w| w[1] - w[0]).collect();
            let total = *lengths.last().unwrap_or(&0.0);
            let tail = &inc[inc.len().saturating_sub(4)..];
            let finite = tail.iter().all(|&d| d <= 1e-12 * total)
                || (tail.len() >= 2 && tail.windows(2).all(|w| w[1] <= INCREMENT_RATIO * w[0]));
            Ok(RayLength { ray: zeta.into(), lengths, finite })
        })
        .collect()
}

/// Per sample: `|omega'(z)| <= (1-|omega(z)|^2)/(1-|z|^2)`; `upper` is the slack.
pub fn schwarz_pick_check(map: &HarmonicMap, samples: &[Complex64]) -> Result<Vec<MarginRecord>> {
    samples
        .iter()
        .map(|&z| {
            let d = schwarzian_data(map, z)?;
            let rhs = (1.0 - d.omega.norm_sqr()) / (1.0 - z.norm_sqr());
            let lhs = d.omega1.norm();
            Ok(MarginRecord::new(z, lhs, rhs - lhs, 1e-12 * rhs.max(1.0)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcore::{catalog_get, AnalyticRep, ClassFlags, Params, Series};

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shear(b: f64) -> HarmonicMap {
        catalog_get("shear_omega_bz", &Params::from_pairs([("b", b)])).unwrap()
    }

    fn koebe() -> HarmonicMap {
        catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap()
    }

    #[test]
    fn identity_is_flat() {
        let id = catalog_get("identity", &Params::default()).unwrap();
        let d = schwarzian_data(&id, z(0.3, -0.2)).unwrap();
        let zero = z(0.0, 0.0);
        assert_eq!((d.th, d.sh, d.pf, d.sf, d.omega), (zero, zero, zero, zero, zero));
    }

    #[test]
    fn koebe_at_origin() {
        let d = schwarzian_data(&koebe(), z(0.0, 0.0)).unwrap();
        assert!((d.th - 4.0).norm() < 1e-12 && (d.pf - 4.0).norm() < 1e-12);
        assert!((d.sh + 6.0).norm() < 1e-12 && (d.sf + 6.0).norm() < 1e-12);
        // S_k(z) = -6/(1-z^2)^2
        let w = z(0.3, 0.4);
        let s = schwarzian_data(&koebe(), w).unwrap().sf;
        assert!((s + 6.0 / (1.0 - w * w).powi(2)).norm() < 1e-10);
    }

    #[test]
    fn shear_pre_schwarzian() {
        let d = schwarzian_data(&shear(1.0), z(0.5, 0.0)).unwrap();
        assert!((d.pf + 2.0 / 3.0).norm() < 1e-15);
        assert!((d.omega - 0.5).norm() < 1e-15 && (d.omega1 - 1.0).norm() < 1e-15);
        assert_eq!(d.omega2, z(0.0, 0.0));
    }

    #[test]
    fn shear_circle_maxima() {
        let est = theorem16_limsup(&shear(1.0), &[0.5, 0.9, 0.99], 64, 0.05).unwrap();
        for &(r, m) in &est.maxima {
            assert!((m + r * r).abs() < 1e-10, "{r}: {m}");
        }
        assert!(est.pass);
    }

    #[test]
    fn koebe_maxima_grow_to_six() {
        let est = theorem16_limsup(&koebe(), &[0.5, 0.9, 0.99], 64, 0.05).unwrap();
        let last = est.maxima[2].1;
        // (1-r^2)(r/(1+r) + 3r/(1-r)) at r = 0.99
        let want = (1.0 - 0.99 * 0.99) * (0.99 / 1.99 + 3.0 * 0.99 / 0.01);
        assert!((last - want).abs() < 1e-9, "{last} vs {want}");
        assert!(last > 5.5 && !est.pass);
    }

    #[test]
    fn degenerate_dilatation_rejected() {
        assert!(schwarzian_data(&shear(1.0), z(0.0, 0.0)).is_ok());
        // omega = z reaches modulus one only on the circle; force |omega| > 1 with a series
        let h = AnalyticRep::identity();
        let g = AnalyticRep::Series(Series::new(vec![z(0.0, 0.0), z(0.0, 0.0), z(1.0, 0.0)], 1.0).unwrap());
        let m = HarmonicMap::new(h, g, ClassFlags::default(), "fold").unwrap();
        assert!(matches!(schwarzian_data(&m, z(0.6, 0.0)), Err(Error::DegenerateDilatation(_))));
    }

    #[test]
    fn rectifiability_examples() {
        let ladder: Vec<f64> = (1..=14).map(|k| 1.0 - 2f64.powi(-k)).collect();
        let one = [z(1.0, 0.0)];
        let id = catalog_get("identity", &Params::default()).unwrap();
        let r = rectifiability_check(&id, &one, &ladder).unwrap();
        assert!(r[0].finite && (r[0].lengths.last().unwrap() - ladder[13]).abs() < 1e-12);
        let a = catalog_get("affine", &Params::from_pairs([("a", 0.5)])).unwrap();
        let r = rectifiability_check(&a, &one, &ladder).unwrap();
        assert!(r[0].finite && (r[0].lengths.last().unwrap() - 1.5 * ladder[13]).abs() < 1e-12);
        let r = rectifiability_check(&koebe(), &one, &ladder).unwrap();
        assert!(!r[0].finite);
    }

    #[test]
    fn schwarz_pick_examples() {
        let a = catalog_get("affine", &Params::from_pairs([("a", 0.5)])).unwrap();
        let pts = [z(0.2, 0.1), z(-0.7, 0.3)];
        let m = schwarz_pick_check(&a, &pts).unwrap();
        assert!(m.iter().all(|r| r.pass && r.lower == 0.0));
        // omega = z: equality
        let m = schwarz_pick_check(&shear(1.0), &pts).unwrap();
        assert!(m.iter().all(|r| r.pass && r.upper.abs() < 1e-12));
        // omega = z^2/2 from h = z, g = z^3/6
        let g = AnalyticRep::Series(Series::new(vec![z(0.0, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(1.0 / 6.0, 0.0)], 1.0).unwrap());
        let m = HarmonicMap::new(AnalyticRep::identity(), g, ClassFlags::default(), "w").unwrap();
        let r = schwarz_pick_check(&m, &[z(0.5, 0.0)]).unwrap();
        assert!((r[0].lower - 0.5).abs() < 1e-15);
        assert!((r[0].upper - ((1.0 - 1.0 / 64.0) / 0.75 - 0.5)).abs() < 1e-15);
        assert!(r[0].pass);
    }
}
