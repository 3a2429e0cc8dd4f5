//! Analytic functions on the disk: closed-form expression trees and
//! truncated power series, both evaluated to third-order jets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jet::Jet3;
use crate::error::{fmt_z, Error, Result};

/// Node of a closed-form expression tree. Children are owned, so every tree
/// is acyclic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum Expr {
    Constant { c: Complex64 },
    Identity,
    /// `a z + b`
    Affine { a: Complex64, b: Complex64 },
    /// `(a z + b) / (c z + d)`
    Mobius { a: Complex64, b: Complex64, c: Complex64, d: Complex64 },
    IntPow { base: Box<Expr>, n: i32 },
    /// Principal branch of `base^p`.
    RealPow { base: Box<Expr>, p: f64 },
    Exp { arg: Box<Expr> },
    /// Principal logarithm; the cut is the closed negative real axis.
    Log { arg: Box<Expr> },
    Recip { arg: Box<Expr> },
    Sum { terms: Vec<Expr> },
    Product { factors: Vec<Expr> },
    Scale { s: Complex64, arg: Box<Expr> },
    /// `outer(inner(z))`
    Compose { outer: Box<Expr>, inner: Box<Expr> },
}

impl Expr {
    pub fn constant(c: Complex64) -> Self {
        Expr::Constant { c }
    }

    pub fn real(x: f64) -> Self {
        Expr::Constant { c: Complex64::new(x, 0.0) }
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn affine(a: Complex64, b: Complex64) -> Self {
        Expr::Affine { a, b }
    }

    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Expr::Mobius { a, b, c, d }
    }

    pub fn int_pow(self, n: i32) -> Self {
        Expr::IntPow { base: Box::new(self), n }
    }

    pub fn real_pow(self, p: f64) -> Self {
        Expr::RealPow { base: Box::new(self), p }
    }

    pub fn exp(self) -> Self {
        Expr::Exp { arg: Box::new(self) }
    }

    pub fn log(self) -> Self {
        Expr::Log { arg: Box::new(self) }
    }

    pub fn recip(self) -> Self {
        Expr::Recip { arg: Box::new(self) }
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        Expr::Sum { terms }
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        Expr::Product { factors }
    }

    pub fn scale(self, s: Complex64) -> Self {
        Expr::Scale { s, arg: Box::new(self) }
    }

    pub fn compose(outer: Expr, inner: Expr) -> Self {
        Expr::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    /// True when the expression is a Möbius transformation node (or the identity).
    pub fn is_mobius(&self) -> bool {
        matches!(self, Expr::Identity | Expr::Affine { .. } | Expr::Mobius { .. })
    }

    /// Evaluate the jet of the expression at the point described by `z`,
    /// which is itself a jet (the identity jet for plain evaluation).
    fn eval_at(&self, z: Jet3) -> Result<Jet3> {
        let zero = Complex64::new(0.0, 0.0);
        Ok(match self {
            Expr::Constant { c } => Jet3::constant(*c),
            Expr::Identity => z,
            Expr::Affine { a, b } => {
                Jet3::new(*a * z.value + *b, *a * z.d1, *a * z.d2, *a * z.d3)
            }
            Expr::Mobius { a, b, c, d } => {
                let den = *c * z.value + *d;
                if den == zero {
                    return Err(Error::SingularNode(format!("mobius pole at {}", fmt_z(z.value))));
                }
                let det = *a * *d - *b * *c;
                let inv = den.inv();
                let outer = Jet3::new(
                    (*a * z.value + *b) * inv,
                    det * inv * inv,
                    -2.0 * *c * det * inv * inv * inv,
                    6.0 * *c * *c * det * inv * inv * inv * inv,
                );
                z.compose(outer)
            }
            Expr::IntPow { base, n } => {
                let b = base.eval_at(z)?;
                if *n < 0 && b.value == zero {
                    return Err(Error::SingularNode("negative power of zero".into()));
                }
                b.powi(*n)
            }
            Expr::RealPow { base, p } => {
                let b = base.eval_at(z)?;
                check_branch(b.value, "real power")?;
                b.powf(*p)
            }
            Expr::Exp { arg } => arg.eval_at(z)?.exp(),
            Expr::Log { arg } => {
                let a = arg.eval_at(z)?;
                check_branch(a.value, "log")?;
                a.ln()
            }
            Expr::Recip { arg } => {
                let a = arg.eval_at(z)?;
                if a.value == zero {
                    return Err(Error::SingularNode("reciprocal of zero".into()));
                }
                a.recip()
            }
            Expr::Sum { terms } => {
                let mut acc = Jet3::constant(zero);
                for t in terms {
                    acc = acc + t.eval_at(z)?;
                }
                acc
            }
            Expr::Product { factors } => {
                let mut acc = Jet3::constant(Complex64::new(1.0, 0.0));
                for f in factors {
                    acc = acc * f.eval_at(z)?;
                }
                acc
            }
            Expr::Scale { s, arg } => arg.eval_at(z)?.scale(*s),
            Expr::Compose { outer, inner } => {
                let w = inner.eval_at(z)?;
                outer.eval_at(w)?
            }
        })
    }
}

fn check_branch(w: Complex64, what: &str) -> Result<()> {
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::SingularNode(format!("{what} at the branch point 0")));
    }
    if w.im == 0.0 && w.re < 0.0 {
        return Err(Error::Domain(format!("{what} argument {} on the branch cut", w.re)));
    }
    Ok(())
}

/// Truncated power series `sum c_n z^n`, trusted for `|z| < radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub coeffs: Vec<Complex64>,
    pub radius: f64,
}

impl Series {
    pub fn new(coeffs: Vec<Complex64>, radius: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvariantViolation("series needs at least one coefficient".into()));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvariantViolation(format!("series radius {radius} not in (0, 1]")));
        }
        Ok(Self { coeffs, radius })
    }

    /// Horner evaluation of the value and first three derivatives.
    pub fn jet(&self, z: Complex64) -> Jet3 {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1, mut p2, mut p3) = (zero, zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            p3 = p3 * z + p2;
            p2 = p2 * z + p1;
            p1 = p1 * z + p0;
            p0 = p0 * z + c;
        }
        // p2 and p3 hold f''/2 and f'''/6
        Jet3::new(p0, p1, 2.0 * p2, 6.0 * p3)
    }

    /// Geometric estimate of the truncation error at modulus `r`, using the
    /// largest of the last eight coefficient magnitudes.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let n = self.coeffs.len();
        let cmax = self.coeffs[n.saturating_sub(8)..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if r >= 1.0 {
            return f64::INFINITY;
        }
        cmax * r.powi(n as i32) / (1.0 - r)
    }
}

/// An analytic function on (part of) the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AnalyticRep {
    Series(Series),
    ClosedForm(Expr),
}

impl AnalyticRep {
    pub fn zero() -> Self {
        AnalyticRep::ClosedForm(Expr::zero())
    }

    pub fn identity() -> Self {
        AnalyticRep::ClosedForm(Expr::Identity)
    }

    /// Radius of the disk on which the representation is trusted.
    pub fn valid_radius(&self) -> f64 {
        match self {
            AnalyticRep::Series(s) => s.radius,
            AnalyticRep::ClosedForm(_) => 1.0,
        }
    }

    pub fn eval_jet(&self, z: Complex64) -> Result<Jet3> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite point {}", fmt_z(z))));
        }
        let jet = match self {
            AnalyticRep::Series(s) => {
                if z.norm() >= s.radius {
                    return Err(Error::Domain(format!(
                        "|z| = {} outside series radius {}",
                        z.norm(),
                        s.radius
                    )));
                }
                s.jet(z)
            }
            AnalyticRep::ClosedForm(e) => e.eval_at(Jet3::variable(z))?,
        };
        if !jet.is_finite() {
            return Err(Error::SingularNode(format!("non-finite jet at {}", fmt_z(z))));
        }
        Ok(jet)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_jet(z).map(|j| j.value)
    }

    /// `z -> outer * F(z / rot)` for unit `rot`.
    pub fn rotated(&self, outer: Complex64, rot: Complex64) -> Self {
        match self {
            AnalyticRep::Series(s) => {
                let mut turn = Complex64::new(1.0, 0.0);
                let coeffs = s
                    .coeffs
                    .iter()
                    .map(|c| {
                        let v = outer * c * turn;
                        turn /= rot;
                        v
                    })
                    .collect();
                AnalyticRep::Series(Series { coeffs, radius: s.radius })
            }
            AnalyticRep::ClosedForm(e) => AnalyticRep::ClosedForm(
                Expr::compose(e.clone(), Expr::affine(rot.conj(), Complex64::new(0.0, 0.0))).scale(outer),
            ),
        }
    }

    /// Degree-`n` Taylor polynomial as a series representation.
    pub fn to_series(&self, n: usize) -> Result<Series> {
        Series::new(self.taylor_coefficients(n)?, self.valid_radius())
    }

    /// True when the function is identically zero by construction.
    pub fn is_zero(&self) -> bool {
        match self {
            AnalyticRep::Series(s) => s.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)),
            AnalyticRep::ClosedForm(Expr::Constant { c }) => *c == Complex64::new(0.0, 0.0),
            AnalyticRep::ClosedForm(_) => false,
        }
    }

    /// Taylor coefficients `c_0..=c_n`.
    ///
    /// Series are copied (and zero-padded). Closed forms use the trapezoid
    /// rule for the Cauchy integral on `|z| = rho` with `16 * max(n, 32)`
    /// nodes. The radius grows towards the validity radius as `n` grows so
    /// that the `rho^-n` amplification of rounding error stays bounded.
    pub fn taylor_coefficients(&self, n: usize) -> Result<Vec<Complex64>> {
        match self {
            AnalyticRep::Series(s) => {
                let mut out: Vec<Complex64> = s.coeffs.iter().take(n + 1).copied().collect();
                out.resize(n + 1, Complex64::new(0.0, 0.0));
                Ok(out)
            }
            AnalyticRep::ClosedForm(_) => {
                let rho = cauchy_radius(self.valid_radius(), n);
                if !(rho > 0.0) {
                    return Err(Error::Domain("no admissible Cauchy radius".into()));
                }
                let m = 16 * n.max(32);
                let mut samples = Vec::with_capacity(m);
                for j in 0..m {
                    let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64);
                    samples.push(self.eval(z)?);
                }
                let peak = samples.iter().map(|f| f.norm()).fold(0.0, f64::max);
                let mut out = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, f) in samples.iter().enumerate() {
                        let phase = -2.0 * PI * ((j * k) % m) as f64 / m as f64;
                        acc += f * Complex64::from_polar(1.0, phase);
                    }
                    let scale = rho.powi(k as i32);
                    let c = acc / (m as f64 * scale);
                    // below the round-off floor of the Cauchy sum
                    if c.norm() <= COEFF_NOISE * peak / scale {
                        out.push(Complex64::new(0.0, 0.0));
                    } else {
                        out.push(c);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Radius used for coefficient extraction: 0.5 for low orders, approaching
/// the boundary like `1 - 4/(n+1)` for high orders.
const COEFF_NOISE: f64 = 1e-13;

pub(crate) fn cauchy_radius(valid: f64, n: usize) -> f64 {
    let base = 0.5f64.min(0.9 * valid);
    let high = valid * (1.0 - 4.0 / (n as f64 + 1.0));
    base.max(high)
}
