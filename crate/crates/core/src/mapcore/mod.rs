//! Harmonic maps `f = h + conj(g)` of the unit disk and their analytic parts.

mod analytic;
pub mod catalog;
mod jet;
pub mod spec;

pub use analytic::{AnalyticRep, Expr, Series};
pub use catalog::{all_entries, catalog_get, reference_set, Params};
pub use jet::Jet3;
pub use spec::{load_map_spec, MapSpec};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization and geometry flags carried by a map.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub in_sh: bool,
    pub in_sh0: bool,
    pub bounded_image: bool,
    pub known_k: Option<f64>,
    /// Bounded image known to fail the John condition; used as a negative control.
    pub john_failing_reference: bool,
}

/// A sense-preserving harmonic map `f = h + conj(g)` of the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMap {
    pub h: AnalyticRep,
    pub g: AnalyticRep,
    pub flags: ClassFlags,
    pub label: String,
    /// Boundary directions (unit complex numbers) where the map degenerates;
    /// diagnostics always add these to their ray sets.
    pub singular_directions: Vec<Complex64>,
}

const NORMALIZATION_TOL: f64 = 1e-12;

impl HarmonicMap {
    /// Build a map and check the flag invariants at the origin.
    pub fn new(h: AnalyticRep, g: AnalyticRep, flags: ClassFlags, label: impl Into<String>) -> Result<Self> {
        let map = Self { h, g, flags, label: label.into(), singular_directions: Vec::new() };
        map.validate()?;
        Ok(map)
    }

    pub fn with_singular_directions(mut self, dirs: Vec<Complex64>) -> Self {
        self.singular_directions = dirs;
        self
    }

    /// Conformal map (g = 0).
    pub fn analytic(h: AnalyticRep, flags: ClassFlags, label: impl Into<String>) -> Result<Self> {
        Self::new(h, AnalyticRep::zero(), flags, label)
    }

    pub fn validate(&self) -> Result<()> {
        let o = Complex64::new(0.0, 0.0);
        let g0 = self.g.eval_jet(o)?;
        if g0.value.norm() > NORMALIZATION_TOL {
            return Err(Error::InvariantViolation(format!("g(0) = {} != 0", g0.value)));
        }
        if self.flags.in_sh || self.flags.in_sh0 {
            let h0 = self.h.eval_jet(o)?;
            if h0.value.norm() > NORMALIZATION_TOL {
                return Err(Error::InvariantViolation(format!("h(0) = {} != 0", h0.value)));
            }
            if (h0.d1 - 1.0).norm() > NORMALIZATION_TOL {
                return Err(Error::InvariantViolation(format!("h'(0) = {} != 1", h0.d1)));
            }
        }
        if self.flags.in_sh0 && g0.d1.norm() > NORMALIZATION_TOL {
            return Err(Error::InvariantViolation(format!("g'(0) = {} != 0", g0.d1)));
        }
        if let Some(k) = self.flags.known_k {
            if !(k >= 1.0) {
                return Err(Error::InvariantViolation(format!("known K = {k} < 1")));
            }
        }
        Ok(())
    }

    /// Normalization flags that can be read off at the origin.
    pub fn infer_normalization(h: &AnalyticRep, g: &AnalyticRep) -> Result<(bool, bool)> {
        let o = Complex64::new(0.0, 0.0);
        let h0 = h.eval_jet(o)?;
        let g0 = g.eval_jet(o)?;
        let in_sh = h0.value.norm() <= NORMALIZATION_TOL
            && (h0.d1 - 1.0).norm() <= NORMALIZATION_TOL
            && g0.value.norm() <= NORMALIZATION_TOL;
        Ok((in_sh, in_sh && g0.d1.norm() <= NORMALIZATION_TOL))
    }

    /// Rotation conjugate `z -> e^{it} f(e^{-it} z)`.
    pub fn rotated(&self, theta: f64) -> Self {
        let u = Complex64::from_polar(1.0, theta);
        Self {
            h: self.h.rotated(u, u),
            g: self.g.rotated(u.conj(), u),
            flags: self.flags.clone(),
            label: format!("rot({}, {theta})", self.label),
            singular_directions: self.singular_directions.iter().map(|d| d * u).collect(),
        }
    }

    pub fn is_conformal(&self) -> bool {
        self.g.is_zero()
    }

    /// Largest radius on which both parts can be evaluated.
    pub fn valid_radius(&self) -> f64 {
        self.h.valid_radius().min(self.g.valid_radius())
    }

    pub fn jets(&self, z: Complex64) -> Result<(Jet3, Jet3)> {
        Ok((self.h.eval_jet(z)?, self.g.eval_jet(z)?))
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.eval(z)? + self.g.eval(z)?.conj())
    }

    /// Derivative of `t -> f(t * zeta)` for a unit direction `zeta`.
    pub fn radial_derivative(&self, t: f64, zeta: Complex64) -> Result<Complex64> {
        let z = zeta * t;
        let (h, g) = self.jets(z)?;
        Ok(h.d1 * zeta + (g.d1 * zeta).conj())
    }

    /// Derivative of `theta -> f(r e^{i theta})`.
    pub fn angular_derivative(&self, r: f64, theta: f64) -> Result<Complex64> {
        let z = Complex64::from_polar(r, theta);
        let (h, g) = self.jets(z)?;
        let iz = Complex64::i() * z;
        Ok(h.d1 * iz + (g.d1 * iz).conj())
    }
}
