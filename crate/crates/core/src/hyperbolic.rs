//! Hyperbolic metric of the disk and the distortion bounds built on it.
//!
//! Every check that depends on the growth constant `alpha` reports relative
//! to the configured value; the sharp value is not known.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_z, Error, Result};
use crate::frame::frame_at;
use crate::mapcore::HarmonicMap;
use crate::report::{Complex, MarginRecord};

/// Stand-in for the growth constant `sup |h''(0)|/2` over normalized maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaConfig {
    pub alpha: f64,
}

impl AlphaConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::ParamOutOfRange(format!("alpha = {alpha} must be positive")));
        }
        Ok(Self { alpha })
    }
}

impl Default for AlphaConfig {
    /// Second coefficient of the h-part of the harmonic Koebe map.
    fn default() -> Self {
        Self { alpha: 2.5 }
    }
}

fn check_in_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{} is not in the unit disk", fmt_z(z))));
    }
    Ok(())
}

/// `|(z1 - z2) / (1 - conj(z1) z2)|`
pub fn pseudo_hyperbolic(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_in_disk(z1)?;
    check_in_disk(z2)?;
    Ok(((z1 - z2) / (1.0 - z1.conj() * z2)).norm())
}

/// `artanh(p)` in the form `log1p(2p/(1-p))/2`, accurate for `p` near 1.
pub fn artanh_stable(p: f64) -> f64 {
    0.5 * (2.0 * p / (1.0 - p)).ln_1p()
}

/// Hyperbolic distance with curvature normalization `tanh(lambda) = pseudo-distance`.
pub fn hyperbolic_distance(z1: Complex64, z2: Complex64) -> Result<f64> {
    // 1 - p computed from |1 - conj(z1) z2|^2 - |z1 - z2|^2 = (1-|z1|^2)(1-|z2|^2)
    // keeps precision for far-apart points near the boundary
    check_in_disk(z1)?;
    check_in_disk(z2)?;
    let num = (z1 - z2).norm();
    let den = (1.0 - z1.conj() * z2).norm();
    if num == 0.0 {
        return Ok(0.0);
    }
    let (r1, r2) = (z1.norm(), z2.norm());
    let prod = (1.0 - r1) * (1.0 + r1) * (1.0 - r2) * (1.0 + r2);
    // 1 - p^2 = prod / den^2 ; 1 - p = prod / (den (den + num))
    let one_minus_p = prod / (den * (den + num));
    let p = num / den;
    Ok(0.5 * (2.0 * p / one_minus_p).ln_1p())
}

/// Per-sample check of `(1-|z|)^{a-1}/(1+|z|)^{a+1} <= |h'(z)| <= (1+|z|)^{a-1}/(1-|z|)^{a+1}`.
pub fn check_lemma_b(map: &HarmonicMap, alpha: AlphaConfig, samples: &[Complex64]) -> Result<Vec<MarginRecord>> {
    let a = alpha.alpha;
    samples
        .iter()
        .map(|&z| {
            check_in_disk(z)?;
            let r = z.norm();
            let hp = map.h.eval_jet(z)?.d1.norm();
            let lo = (1.0 - r).powf(a - 1.0) / (1.0 + r).powf(a + 1.0);
            let hi = (1.0 + r).powf(a - 1.0) / (1.0 - r).powf(a + 1.0);
            Ok(MarginRecord::new(z, hp - lo, hi - hp, 0.0))
        })
        .collect()
}

/// One pair of the two-point distortion check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMargin {
    pub z1: Complex,
    pub z2: Complex,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Per-pair check of
/// `||D_f(z1)|| e^{-(1+a) lambda} / 2 <= ||D_f(z2)|| <= 2 ||D_f(z1)|| e^{(1+a) lambda}`.
pub fn check_lemma23(
    map: &HarmonicMap,
    alpha: AlphaConfig,
    pairs: &[(Complex64, Complex64)],
) -> Result<Vec<PairMargin>> {
    two_point(map, 1.0 + alpha.alpha, pairs)
}

/// Same check with exponent `2(1+a)`, which is what the bound
/// `((1+p)/(1-p))^{1+a}` on `|h'(z2)/h'(z1)|` gives in terms of `lambda = artanh p`.
pub fn check_two_point_sharp(
    map: &HarmonicMap,
    alpha: AlphaConfig,
    pairs: &[(Complex64, Complex64)],
) -> Result<Vec<PairMargin>> {
    two_point(map, 2.0 * (1.0 + alpha.alpha), pairs)
}

fn two_point(map: &HarmonicMap, exponent: f64, pairs: &[(Complex64, Complex64)]) -> Result<Vec<PairMargin>> {
    pairs
        .iter()
        .map(|&(z1, z2)| {
            let lam = hyperbolic_distance(z1, z2)?;
            let d1 = frame_at(map, z1)?.opnorm;
            let d2 = frame_at(map, z2)?.opnorm;
            let growth = (exponent * lam).exp();
            // relative margins, so that a pass is scale-free
            let lower = (d2 - 0.5 * d1 / growth) / d2.max(f64::MIN_POSITIVE);
            let upper = (2.0 * d1 * growth - d2) / d2.max(f64::MIN_POSITIVE);
            Ok(PairMargin {
                z1: z1.into(),
                z2: z2.into(),
                lower,
                upper,
                pass: lower >= -1e-12 && upper >= -1e-12,
            })
        })
        .collect()
}

/// Box distortion constant `2 exp((1+a)(a3 + log((2 a2 - a1)/a1) / 2))`.
pub fn lemma24_constant(a1: f64, a2: f64, a3: f64, alpha: AlphaConfig) -> Result<f64> {
    if !(a1 > 0.0) || !(a2 >= a1) || !(a3 >= 0.0) {
        return Err(Error::ParamOutOfRange(format!("need 0 < a1 <= a2, a3 >= 0; got ({a1}, {a2}, {a3})")));
    }
    let exponent = (1.0 + alpha.alpha) * (a3 + 0.5 * ((2.0 * a2 - a1) / a1).ln());
    Ok(2.0 * exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcore::{catalog_get, Params};

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        assert_eq!(pseudo_hyperbolic(z(0.5, 0.0), z(0.5, 0.0)).unwrap(), 0.0);
        assert_eq!(pseudo_hyperbolic(z(0.0, 0.0), z(0.5, 0.0)).unwrap(), 0.5);
        let p = pseudo_hyperbolic(z(0.3, 0.0), z(-0.3, 0.0)).unwrap();
        assert!((p - 0.6 / 1.09).abs() < 1e-15);
        assert!(matches!(pseudo_hyperbolic(z(1.0, 0.0), z(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyperbolic_distance(z(0.0, 0.0), z(0.0, 0.0)).unwrap(), 0.0);
        let d = hyperbolic_distance(z(0.0, 0.0), z(0.5, 0.0)).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!(matches!(hyperbolic_distance(z(0.0, 1.0), z(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_near_boundary_keeps_precision() {
        let r = 1.0 - 1e-12;
        let d = hyperbolic_distance(z(0.0, 0.0), z(r, 0.0)).unwrap();
        // artanh(r) = ln((1+r)/(1-r))/2
        let want = 0.5 * ((1.0 + r) / (1.0 - r)).ln();
        assert!((d - want).abs() < 1e-12, "{d} vs {want}");
        assert!((d - r.atanh()).abs() < 1e-12);
        assert!((artanh_stable(0.5) - 0.5 * 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn lemma_b_examples() {
        let id = catalog_get("identity", &Params::default()).unwrap();
        let pts = [z(0.3, 0.1), z(-0.7, 0.2), z(0.0, 0.95)];
        for a in [1.0, 2.5] {
            let m = check_lemma_b(&id, AlphaConfig::new(a).unwrap(), &pts).unwrap();
            assert!(m.iter().all(|r| r.pass));
        }
        let k = catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap();
        let ok = check_lemma_b(&k, AlphaConfig::new(2.5).unwrap(), &[z(0.5, 0.0)]).unwrap();
        assert!(ok[0].pass);
        // |k'(0.5)| = 12, upper bound 1.5^1.5 / 0.5^3.5
        assert!((ok[0].upper - (1.5f64.powf(1.5) / 0.5f64.powf(3.5) - 12.0)).abs() < 1e-10);
        let bad = check_lemma_b(&k, AlphaConfig::new(1.5).unwrap(), &[z(0.9, 0.0)]).unwrap();
        assert!(!bad[0].pass);
        assert!((bad[0].upper - (1.9f64.sqrt() / 0.1f64.powf(2.5) - 1900.0)).abs() < 1e-6);
    }

    #[test]
    fn lemma23_examples() {
        let k = catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap();
        let m = check_lemma23(&k, AlphaConfig::default(), &[(z(0.4, 0.3), z(0.4, 0.3))]).unwrap();
        assert!(m[0].pass);
        assert!((m[0].lower - 0.5).abs() < 1e-15 && (m[0].upper - 1.0).abs() < 1e-15);
        let id = catalog_get("identity", &Params::default()).unwrap();
        let m = check_lemma23(&id, AlphaConfig::default(), &[(z(0.0, 0.0), z(0.9, -0.3))]).unwrap();
        assert!(m[0].pass);
    }

    #[test]
    fn printed_two_point_exponent_too_small() {
        // |k'(0.95)| = 1.95/0.05^3 = 15600 > 2 e^{3.5 artanh 0.95} = 2 * 39^{1.75}
        let k = catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap();
        let pair = [(z(0.0, 0.0), z(0.95, 0.0))];
        let m = check_lemma23(&k, AlphaConfig::default(), &pair).unwrap();
        assert!(!m[0].pass);
        assert!((m[0].upper - (2.0 * 39f64.powf(1.75) - 15600.0) / 15600.0).abs() < 1e-9);
        let s = check_two_point_sharp(&k, AlphaConfig::default(), &pair).unwrap();
        assert!(s[0].pass);
        let pairs: Vec<_> = (0..200)
            .map(|j| {
                let t = j as f64 * 0.7;
                (Complex64::from_polar(0.99 * (t.sin().abs()), t), Complex64::from_polar(0.999 * (1.3 * t).cos().abs(), -t))
            })
            .collect();
        assert!(check_two_point_sharp(&k, AlphaConfig::default(), &pairs).unwrap().iter().all(|m| m.pass));
    }

    #[test]
    fn lemma24_examples() {
        let a1 = AlphaConfig::new(1.0).unwrap();
        assert_eq!(lemma24_constant(1.0, 1.0, 0.0, a1).unwrap(), 2.0);
        let v = lemma24_constant(1.0, 2.0, 1.0, a1).unwrap();
        assert!((v - 6.0 * 1f64.exp().powi(2)).abs() < 1e-12 * v, "{v}");
        assert!((v - 44.334).abs() < 1e-3);
        let v = lemma24_constant(1.0, 2.0, 1.0, AlphaConfig::default()).unwrap();
        assert!((v - 2.0 * 3.5f64.exp() * 3f64.powf(1.75)).abs() < 1e-10);
        assert!((v - 452.92).abs() < 0.01);
        assert!(matches!(lemma24_constant(0.0, 1.0, 0.0, a1), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(lemma24_constant(2.0, 1.0, 0.0, a1), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn alpha_must_be_positive() {
        assert!(AlphaConfig::new(0.0).is_err());
        assert!(AlphaConfig::new(-1.0).is_err());
    }
}
