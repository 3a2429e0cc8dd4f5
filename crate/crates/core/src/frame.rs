//! Pointwise differential of `f = h + conj(g)` and quasiconformality checks.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_z, Error, Result};
use crate::mapcore::HarmonicMap;
use crate::report::MarginRecord;

/// Below this ratio `l(D_f) / ||D_f||` the local dilatation is reported as infinite.
const NEAR_CRITICAL: f64 = 1e-14;

/// Differential data of a harmonic map at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeFrame {
    pub fz: Complex64,
    pub fzbar: Complex64,
    /// `||D_f|| = |f_z| + |f_zbar|`
    pub opnorm: f64,
    /// `l(D_f) = ||f_z| - |f_zbar||`
    pub lnorm: f64,
    pub jacobian: f64,
    /// `omega = g'/h'`; `None` at critical points of `h`.
    pub dilatation: Option<Complex64>,
    /// `None` at critical points of `h`, `+inf` where `l(D_f)` vanishes.
    pub local_k: Option<f64>,
}

impl DerivativeFrame {
    pub fn is_sense_preserving(&self) -> bool {
        self.jacobian > 0.0
    }
}

/// Differential of `f` at `z`: `f_z = h'`, `f_zbar = conj(g')`.
///
/// At a critical point of `h` the frame is still returned, with the
/// dilatation and local dilatation left undefined.
pub fn frame_at(map: &HarmonicMap, z: Complex64) -> Result<DerivativeFrame> {
    let (h, g) = map.jets(z)?;
    let fz = h.d1;
    let fzbar = g.d1.conj();
    let (a, b) = (fz.norm(), fzbar.norm());
    let opnorm = a + b;
    let lnorm = (a - b).abs();
    let jacobian = a * a - b * b;
    let zero = Complex64::new(0.0, 0.0);
    let (dilatation, local_k) = if fz == zero {
        (None, None)
    } else {
        let k = if lnorm < NEAR_CRITICAL * opnorm { f64::INFINITY } else { opnorm / lnorm };
        (Some(g.d1 / h.d1), Some(k))
    };
    Ok(DerivativeFrame { fz, fzbar, opnorm, lnorm, jacobian, dilatation, local_k })
}

/// Like [`frame_at`] but an error at critical points.
pub fn frame_at_strict(map: &HarmonicMap, z: Complex64) -> Result<DerivativeFrame> {
    let fr = frame_at(map, z)?;
    if fr.dilatation.is_none() {
        return Err(Error::CriticalPoint(fmt_z(z)));
    }
    Ok(fr)
}

/// Polar sampling grid `{r e^{i theta}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl PolarGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Self {
        Self { radii, angles }
    }

    /// 64 radii `1 - 2^{-k/8}` (k = 0..64) times 128 angles.
    pub fn default_grid() -> Self {
        Self { radii: (0..64).map(|k| 1.0 - 2f64.powf(-(k as f64) / 8.0)).collect(), angles: 128 }
    }

    /// Uniform grid of `nr` radii in `(0, r_max]`.
    pub fn uniform(nr: usize, r_max: f64, angles: usize) -> Self {
        Self { radii: (1..=nr).map(|k| r_max * k as f64 / nr as f64).collect(), angles }
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radii.len() * self.angles);
        for &r in &self.radii {
            for j in 0..self.angles {
                let t = 2.0 * std::f64::consts::PI * j as f64 / self.angles as f64;
                pts.push(Complex64::from_polar(r, t));
            }
        }
        pts
    }
}

/// Supremum of the local dilatation over a grid.
pub fn qc_constant(map: &HarmonicMap, grid: &PolarGrid) -> Result<f64> {
    if grid.radii.iter().any(|&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::Domain("grid radii must lie in [0, 1)".into()));
    }
    let ks: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&z| {
            let fr = frame_at_strict(map, z)?;
            if !fr.is_sense_preserving() {
                return Err(Error::NotSensePreserving(fmt_z(z)));
            }
            Ok(fr.local_k.unwrap_or(f64::INFINITY))
        })
        .collect::<Result<_>>()?;
    Ok(ks.into_iter().fold(1.0, f64::max))
}

/// Two-sided distortion bound for a K-quasiconformal harmonic self-map of the disk:
/// `(1+K)/(2K) Q <= |f_z| <= (K+1)/2 Q` with `Q = (1-|f|^2)/(1-|z|^2)`.
pub fn check_theorem_a(map: &HarmonicMap, k: f64, samples: &[Complex64], tol: f64) -> Result<Vec<MarginRecord>> {
    samples
        .iter()
        .map(|&z| {
            let w = map.eval(z)?;
            if w.norm() >= 1.0 {
                return Err(Error::NotSelfMap(fmt_z(z)));
            }
            let q = (1.0 - w.norm_sqr()) / (1.0 - z.norm_sqr());
            let fz = map.h.eval_jet(z)?.d1.norm();
            let lower = fz - (1.0 + k) / (2.0 * k) * q;
            let upper = (k + 1.0) / 2.0 * q - fz;
            Ok(MarginRecord::new(z, lower, upper, tol))
        })
        .collect()
}

/// Exponent grid `0.05, 0.10, ..., 8.00`.
pub fn theorem_b_grid() -> Vec<f64> {
    (1..=160).map(|k| k as f64 * 0.05).collect()
}

/// Smallest exponent `c1` on [`theorem_b_grid`] for which
/// `||D_f(r4 xi)|| >= 2^{-(1+c1)} ||D_f(r3 xi)|| ((1-r4)/(1-r3))^{c1-1}`
/// holds for every ray and every ladder pair `r3 <= r4`; `+inf` if none does.
pub fn theorem_b_exponent_fit(map: &HarmonicMap, rays: &[Complex64], ladder: &[f64]) -> Result<f64> {
    let mut pairs = Vec::new();
    for &xi in rays {
        let norms: Vec<f64> = ladder
            .iter()
            .map(|&r| frame_at(map, xi * r).map(|f| f.opnorm))
            .collect::<Result<_>>()?;
        for i in 0..ladder.len() {
            for j in i..ladder.len() {
                let x = (1.0 - ladder[j]) / (1.0 - ladder[i]);
                pairs.push((norms[i], norms[j], x));
            }
        }
    }
    // the right-hand side decreases in c1, so the admissible set is upward closed
    for c1 in theorem_b_grid() {
        let ok = pairs
            .iter()
            .all(|&(d3, d4, x)| d4 >= 2f64.powf(-(1.0 + c1)) * d3 * x.powf(c1 - 1.0) * (1.0 - 1e-12));
        if ok {
            return Ok(c1);
        }
    }
    Ok(f64::INFINITY)
}
