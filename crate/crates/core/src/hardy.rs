//! Integral means `M_p(r, .)`, Hardy norms over the ladder, the series
//! `phi(r) = sum n^2 (|a_n|^2 + |b_n|^2) r^{2n-2}` and coefficient sums.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::john::{settle, Thresholds};
use crate::mapcore::HarmonicMap;
use crate::report::extended_float;

/// Initial trapezoid nodes on a circle.
pub const INITIAL_NODES: usize = 1 << 12;
/// Node cap for the doubling loop.
pub const MAX_NODES: usize = 1 << 22;
/// Relative change between doublings accepted as converged.
pub const MEAN_TOL: f64 = 1e-8;

fn circle_values<F>(field: &F, r: f64, n: usize, offset: usize, stride: usize) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    (0..n / stride)
        .into_par_iter()
        .map(|j| {
            let t = 2.0 * PI * (offset + j * stride) as f64 / n as f64;
            field(Complex64::from_polar(r, t)).map(f64::abs)
        })
        .collect()
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

/// `M_p(r) = ((1/2pi) int |field(r e^{it})|^p dt)^{1/p}`; `p = inf` gives the circle maximum.
pub fn integral_mean<F>(field: F, p: f64, r: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    if !(p > 0.0) {
        return Err(Error::ParamOutOfRange(format!("exponent p = {p} must be positive")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::ParamOutOfRange(format!("radius {r} outside (0, 1)")));
    }
    let mut n = INITIAL_NODES;
    let vals = circle_values(&field, r, n, 0, 1)?;
    if p.is_infinite() {
        let (j, &m) = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nodes present");
        let h = 2.0 * PI / n as f64;
        let t0 = h * j as f64;
        let polished = golden_max(|t| field(Complex64::from_polar(r, t)).map(f64::abs), t0 - h, t0 + h)?;
        return Ok(m.max(polished));
    }
    let mut sum: f64 = vals.iter().map(|v| v.powf(p)).sum();
    let mut mean = sum / n as f64;
    loop {
        if n >= MAX_NODES {
            return Err(Error::QuadratureFailure { a: 0.0, b: 2.0 * PI });
        }
        n *= 2;
        sum += circle_values(&field, r, n, 1, 2)?.iter().map(|v| v.powf(p)).sum::<f64>();
        let next = sum / n as f64;
        if !next.is_finite() {
            return Err(Error::QuadratureFailure { a: 0.0, b: 2.0 * PI });
        }
        let done = (next - mean).abs() <= MEAN_TOL * next.abs();
        mean = next;
        if done {
            return Ok(mean.powf(1.0 / p));
        }
    }
}

/// `z -> ||D_f(z)|| = |h'(z)| + |g'(z)|`.
pub fn frame_norm_field(map: &HarmonicMap) -> impl Fn(Complex64) -> Result<f64> + Sync + '_ {
    move |z| map.jets(z).map(|(h, g)| h.d1.norm() + g.d1.norm())
}

/// `z -> |h'(z)|^2 + |g'(z)|^2`.
pub fn energy_field(map: &HarmonicMap) -> impl Fn(Complex64) -> Result<f64> + Sync + '_ {
    move |z| map.jets(z).map(|(h, g)| h.d1.norm_sqr() + g.d1.norm_sqr())
}

/// `sup_r M_p(r, field)` over a ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyNorm {
    pub p: f64,
    /// Settled supremum, `+inf` when either divergence rule fires.
    #[serde(with = "extended_float")]
    pub value: f64,
    /// `(r, M_p(r))` per ladder level.
    pub means: Vec<(f64, f64)>,
    /// Running supremum per level.
    pub levels: Vec<f64>,
}

/// Supremum of `M_p(r, field)` over the positive ladder radii, with the
/// growth and refinement rules applied to the running supremum.
pub fn hardy_norm<F>(field: F, p: f64, ladder: &[f64], th: &Thresholds) -> Result<HardyNorm>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ParamOutOfRange("ladder must be increasing".into()));
    }
    let mut means = Vec::with_capacity(ladder.len());
    let mut levels = Vec::with_capacity(ladder.len());
    let mut sup = 0.0f64;
    for &r in ladder.iter().filter(|&&r| r > 0.0) {
        let m = integral_mean(&field, p, r)?;
        sup = sup.max(m);
        means.push((r, m));
        levels.push(sup);
    }
    Ok(HardyNorm { p, value: settle(&levels, th), means, levels })
}

/// Largest number of coefficients tried by [`varphi_series`].
pub const MAX_TERMS: usize = 2048;
/// Accepted relative size of the tail estimate.
pub const TAIL_TOL: f64 = 1e-6;

/// Partial sum of `phi(r)` and a geometric tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarphiValue {
    pub r: f64,
    /// Partial sum plus tail.
    pub value: f64,
    pub tail: f64,
    pub terms: usize,
}

fn geometric_tail(terms: &[f64]) -> f64 {
    let n = terms.len();
    let q4 = n / 4;
    let a = terms[n / 2..n - q4].iter().copied().fold(0.0, f64::max);
    let b = terms[n - q4..].iter().copied().fold(0.0, f64::max);
    if b == 0.0 {
        return 0.0;
    }
    if a == 0.0 {
        return f64::INFINITY;
    }
    let q = (b / a).powf(1.0 / q4 as f64);
    if q >= 1.0 {
        f64::INFINITY
    } else {
        b * q / (1.0 - q)
    }
}

/// `sum_{n>=1} n^2 (|a_n|^2 + |b_n|^2) r^{2n-2}`, which equals the circle mean of `|h'|^2 + |g'|^2`.
pub fn varphi_series(map: &HarmonicMap, r: f64) -> Result<VarphiValue> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::ParamOutOfRange(format!("radius {r} outside [0, 1)")));
    }
    let mut n = 64;
    loop {
        let a = map.h.taylor_coefficients(n)?;
        let b = map.g.taylor_coefficients(n)?;
        let terms: Vec<f64> = (1..=n)
            .map(|k| (k * k) as f64 * (a[k].norm_sqr() + b[k].norm_sqr()) * r.powi(2 * k as i32 - 2))
            .collect();
        let partial: f64 = terms.iter().sum();
        let tail = geometric_tail(&terms);
        if tail <= 1e-15 * partial || n >= MAX_TERMS {
            if !(tail <= TAIL_TOL * partial) {
                return Err(Error::TruncationTooCoarse(tail / partial));
            }
            return Ok(VarphiValue { r, value: partial + tail, tail, terms: n });
        }
        n *= 2;
    }
}

/// Moduli `|a_n|`, `|b_n|` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub n: usize,
}

impl CoefficientTable {
    pub fn from_map(map: &HarmonicMap, n: usize) -> Result<Self> {
        let a = map.h.taylor_coefficients(n)?;
        let b = map.g.taylor_coefficients(n)?;
        Ok(Self { a: a[1..].iter().map(|c| c.norm()).collect(), b: b[1..].iter().map(|c| c.norm()).collect(), n })
    }

    /// Table from closed-form moduli.
    pub fn from_fn(n: usize, a: impl Fn(usize) -> f64, b: impl Fn(usize) -> f64) -> Self {
        Self { a: (1..=n).map(&a).collect(), b: (1..=n).map(&b).collect(), n }
    }

    /// `(n, |a_n|, |b_n|)` rows.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| vec![(i + 1) as f64, self.a[i], self.b[i]]).collect()
    }
}

/// Largest ratio of consecutive dyadic-block sums read as convergence.
pub const BLOCK_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSum {
    pub beta: f64,
    /// `(N, S_N)` for `N = 2..=table.n`.
    pub partial: Vec<(usize, f64)>,
    /// Sums over complete blocks `[2^k, 2^{k+1})`, `k >= 1`.
    pub blocks: Vec<f64>,
    pub convergent: bool,
}

/// `S_N(beta) = sum_{n=2}^N n^{1+beta} (|a_n|^2 + |b_n|^2)`; convergent when
/// each of the last three block sums is at most [`BLOCK_RATIO`] times its predecessor.
pub fn coefficient_sum(table: &CoefficientTable, beta: f64) -> CoefficientSum {
    let mut partial = Vec::with_capacity(table.n.saturating_sub(1));
    let mut s = 0.0;
    let term = |n: usize| (n as f64).powf(1.0 + beta) * (table.a[n - 1].powi(2) + table.b[n - 1].powi(2));
    for n in 2..=table.n {
        s += term(n);
        partial.push((n, s));
    }
    let mut blocks = Vec::new();
    let mut k = 1;
    while (1usize << (k + 1)) - 1 <= table.n {
        blocks.push(((1 << k)..(1 << (k + 1))).map(term).sum::<f64>());
        k += 1;
    }
    let negligible = 1e-20 * s.max(1.0);
    let convergent = blocks.len() >= 3 && {
        let last = &blocks[blocks.len() - 3..];
        last[2] <= negligible || last.windows(2).all(|w| w[1] <= BLOCK_RATIO * w[0])
    };
    CoefficientSum { beta, partial, blocks, convergent }
}

/// Cap of the exponent search.
pub const BETA_CAP: f64 = 4.0;

/// Largest `beta` in `[0, BETA_CAP]` whose block sums read as convergent, by bisection.
pub fn beta_critical(table: &CoefficientTable) -> f64 {
    let ok = |b: f64| coefficient_sum(table, b).convergent;
    if ok(BETA_CAP) {
        return BETA_CAP;
    }
    if !ok(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, BETA_CAP);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcore::{catalog_get, AnalyticRep, ClassFlags, Params, Series};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn entry(name: &str, a: f64) -> HarmonicMap {
        catalog_get(name, &Params::from_pairs([("a", a)])).unwrap()
    }

    fn koebe() -> HarmonicMap {
        catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap()
    }

    #[test]
    fn means_of_simple_fields() {
        assert!((integral_mean(|z: Complex64| Ok(z.norm()), 2.0, 0.3).unwrap() - 0.3).abs() < 1e-14);
        let id = catalog_get("identity", &Params::default()).unwrap();
        assert!((integral_mean(frame_norm_field(&id), 1.0, 0.9).unwrap() - 1.0).abs() < 1e-15);
        let af = entry("affine", 0.5);
        assert!((integral_mean(frame_norm_field(&af), 1.0, 0.7).unwrap() - 1.5).abs() < 1e-15);
        // |1 + z| has circle maximum 1 + r
        let m = integral_mean(|z: Complex64| Ok((1.0 + z).norm()), f64::INFINITY, 0.6).unwrap();
        assert!((m - 1.6).abs() < 1e-12);
    }

    #[test]
    fn poisson_kernel_mean() {
        // (1/2pi) int (1-a^2)/|1-a r e^{it}|^2 dt = (1-a^2)/(1-a^2 r^2)
        let a = 0.3;
        let auto = catalog_get("analytic", &Params::default().with("expr", "automorphism").with("a", a)).unwrap();
        let r = 0.99;
        let m = integral_mean(frame_norm_field(&auto), 1.0, r).unwrap();
        assert!((m - (1.0 - a * a) / (1.0 - a * a * r * r)).abs() < 1e-12, "{m}");
    }

    #[test]
    fn hardy_norm_examples() {
        let ladder: Vec<f64> = (1..=12).map(|k| 1.0 - 2f64.powi(-k)).collect();
        let th = Thresholds::default();
        let id = catalog_get("identity", &Params::default()).unwrap();
        assert_eq!(hardy_norm(frame_norm_field(&id), 1.0, &ladder, &th).unwrap().value, 1.0);
        let af = entry("affine", 0.5);
        assert!((hardy_norm(frame_norm_field(&af), 1.0, &ladder, &th).unwrap().value - 1.5).abs() < 1e-14);
        let k = hardy_norm(frame_norm_field(&koebe()), 1.0, &ladder[..10], &th).unwrap();
        assert!(k.value.is_infinite());
        assert!(k.levels.windows(2).all(|w| w[1] > 2.0 * w[0]));
    }

    #[test]
    fn means_input_checks() {
        assert!(integral_mean(|_| Ok(1.0), 0.0, 0.5).is_err());
        assert!(integral_mean(|_| Ok(1.0), 1.0, 1.0).is_err());
        assert!(integral_mean(|_| Ok(f64::NAN), 1.0, 0.5).is_err());
    }

    #[test]
    fn varphi_examples() {
        let id = catalog_get("identity", &Params::default()).unwrap();
        assert!((varphi_series(&id, 0.8).unwrap().value - 1.0).abs() < 1e-12);
        let h = AnalyticRep::Series(Series::new(vec![c(0.0), c(1.0), c(0.5)], 1.0).unwrap());
        let m = HarmonicMap::analytic(h, ClassFlags::default(), "p").unwrap();
        assert!((varphi_series(&m, 0.5).unwrap().value - 1.25).abs() < 1e-15);
        let q = integral_mean(energy_field(&m), 1.0, 0.5).unwrap();
        assert!((q - 1.25).abs() < 1e-10);
        assert!((varphi_series(&koebe(), 0.0).unwrap().value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn varphi_matches_koebe_closed_form() {
        // sum n^4 r^{2n-2} for |a_n| = n
        let r: f64 = 0.5;
        let x = r * r;
        let want = (1.0 + 11.0 * x + 11.0 * x * x + x.powi(3)) / (1.0 - x).powi(5);
        let v = varphi_series(&koebe(), r).unwrap();
        assert!((v.value - want).abs() < 1e-9 * want, "{} vs {want}", v.value);
        let q = integral_mean(energy_field(&koebe()), 1.0, r).unwrap();
        assert!((q - want).abs() < 1e-8 * want);
    }

    #[test]
    fn truncation_guard() {
        let err = varphi_series(&koebe(), 0.999).unwrap_err();
        assert!(matches!(err, Error::TruncationTooCoarse(t) if t > TAIL_TOL));
    }

    #[test]
    fn coefficient_sums() {
        let id = catalog_get("identity", &Params::default()).unwrap();
        let t = CoefficientTable::from_map(&id, 64).unwrap();
        let s = coefficient_sum(&t, 0.5);
        assert!(s.partial.iter().all(|p| p.1 == 0.0) && s.convergent);
        assert_eq!(beta_critical(&t), BETA_CAP);
        let af = CoefficientTable::from_map(&entry("affine", 0.5), 64).unwrap();
        assert!((af.a[0] - 1.0).abs() < 1e-12 && (af.b[0] - 0.5).abs() < 1e-12);
        assert!(coefficient_sum(&af, 1.0).partial.iter().all(|p| p.1 == 0.0));
    }

    #[test]
    fn harmonic_koebe_diverges() {
        let hk = catalog_get("harmonic_koebe", &Params::default()).unwrap();
        let t = CoefficientTable::from_map(&hk, 256).unwrap();
        for n in [2usize, 10, 100, 256] {
            let a = ((n + 1) * (2 * n + 1)) as f64 / 6.0;
            let b = ((n - 1) * (2 * n - 1)) as f64 / 6.0;
            assert!((t.a[n - 1] - a).abs() < 1e-8 * a && (t.b[n - 1] - b).abs() < 1e-8 * a, "{n}");
        }
        for beta in [0.1, 0.5, 1.0] {
            assert!(!coefficient_sum(&t, beta).convergent);
        }
        assert_eq!(beta_critical(&t), 0.0);
    }

    #[test]
    fn synthetic_critical_exponent() {
        // |a_n| = n^{-s}: block sums scale by 2^{beta - 2s + 2}, so the 0.9 rule
        // accepts beta up to 2s - 2 + log2(0.9), approached as N grows
        for s in [1.5, 2.0] {
            let t = CoefficientTable::from_fn(1 << 14, |n| (n as f64).powf(-s), |_| 0.0);
            let want = 2.0 * s - 2.0 + 0.9f64.log2();
            let got = beta_critical(&t);
            assert!((got - want).abs() < 0.02, "s = {s}: {got} vs {want}");
        }
    }
}
