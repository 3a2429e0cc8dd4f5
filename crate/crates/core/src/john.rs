//! John-disk diagnostics: the radial John constant, the derivative-growth
//! fit, the Carleson-box criterion, the Pommerenke-interior bracket, and the
//! tail quantities that drive the radial argument.
//!
//! Every supremum is evaluated over a ladder `r_k = 1 - 2^{-k}` and recorded
//! level by level. A supremum is reported as `+inf` when it grows by more
//! than [`Thresholds::growth`] between the last two levels, or when it moves
//! by more than [`Thresholds::refinement`] under one doubling of the ladder
//! depth. For the exponent fit and the Pommerenke bracket the half-depth
//! value is read off the level history; the John constant and the box
//! supremum depend on a mesh whose offset follows the ladder depth, so
//! [`john_analysis`] recomputes them at half depth.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{frame_at, qc_constant, PolarGrid};
use crate::geometry::{
    boundary_mesh, cumulative_arclength, diam_image_of_arc, diam_image_of_box, diameter, dist_to_boundary,
    ImageGeometry,
};
use crate::hyperbolic::AlphaConfig;
use crate::mapcore::HarmonicMap;
use crate::quad;
use crate::report::{extended_float, fmt_float, Complex};

/// Numeric thresholds behind the finite/infinite dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Growth factor between the last two ladder levels flagged as divergence.
    pub growth: f64,
    /// Relative change between half and full ladder depth flagged as unsettled.
    pub refinement: f64,
    /// Floor for the fitted exponent; reaching it means "failing".
    pub delta_clip: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { growth: 10.0, refinement: 0.10, delta_clip: 0.01 }
    }
}

/// `1 - 2^{-k}` for `k = 0..=depth`.
pub fn dyadic_ladder(depth: usize) -> Vec<f64> {
    (0..=depth).map(|k| 1.0 - 2f64.powi(-(k as i32))).collect()
}

/// `n` equispaced directions plus the map's singular directions.
pub fn default_rays(map: &HarmonicMap, n: usize) -> Vec<Complex64> {
    let mut rays: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    for &d in &map.singular_directions {
        let d = d / d.norm();
        if rays.iter().all(|r| (r - d).norm() > 1e-12) {
            rays.push(d);
        }
    }
    rays
}

/// `+inf` when the last level exceeds `growth` times the previous one.
pub fn growth_rule(levels: &[f64], th: &Thresholds) -> f64 {
    let Some(&last) = levels.last() else {
        return 0.0;
    };
    let n = levels.len();
    if !last.is_finite() || (n >= 2 && levels[n - 2] > 0.0 && last > th.growth * levels[n - 2]) {
        return f64::INFINITY;
    }
    last
}

/// `+inf` when `full` differs from `half` by more than the refinement threshold.
pub fn refinement_rule(full: f64, half: f64, th: &Thresholds) -> f64 {
    if !full.is_finite() || !half.is_finite() || (half > 0.0 && (full - half).abs() > th.refinement * half) {
        return f64::INFINITY;
    }
    full
}

/// Both divergence rules on a level history, the half-depth value being the middle level.
pub fn settle(levels: &[f64], th: &Thresholds) -> f64 {
    let v = growth_rule(levels, th);
    match levels.len() {
        0 => v,
        n => refinement_rule(v, levels[(n - 1) / 2], th),
    }
}

/// A ladder supremum together with its level-by-level history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// Full-depth supremum, `+inf` when the growth rule fired.
    #[serde(with = "extended_float")]
    pub value: f64,
    /// Supremum over ladder levels `0..=k`, for each `k`.
    pub levels: Vec<f64>,
    /// Ray attaining the full-depth supremum.
    pub worst: Complex,
}

impl SupEstimate {
    fn from_levels(levels: Vec<f64>, worst: Complex64, th: &Thresholds) -> Self {
        Self { value: growth_rule(&levels, th), levels, worst: worst.into() }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Radial John constant with center `f(0)`:
/// `sup (length of f([r zeta, rho zeta])) / d(f(r zeta))` over rays and ladder pairs `r <= rho`.
pub fn radial_john_constant(
    map: &HarmonicMap,
    geom: &ImageGeometry,
    rays: &[Complex64],
    ladder: &[f64],
    th: &Thresholds,
) -> Result<SupEstimate> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    let per_ray: Vec<Vec<f64>> = rays
        .par_iter()
        .map(|&zeta| {
            let lengths = cumulative_arclength(map, zeta, ladder)?;
            let dists: Vec<f64> = ladder
                .iter()
                .map(|&r| dist_to_boundary(geom, map.eval(zeta * r)?))
                .collect::<Result<_>>()?;
            // the longest subarc from level i within levels <= k ends at level k
            Ok((0..ladder.len())
                .map(|k| (0..=k).map(|i| (lengths[k] - lengths[i]) / dists[i]).fold(0.0, f64::max))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(combine_rays(&per_ray, rays, th))
}

fn combine_rays(per_ray: &[Vec<f64>], rays: &[Complex64], th: &Thresholds) -> SupEstimate {
    let depth = per_ray.first().map_or(0, Vec::len);
    let mut levels = vec![0.0f64; depth];
    let mut worst = rays.first().copied().unwrap_or(Complex64::new(1.0, 0.0));
    let mut best = f64::NEG_INFINITY;
    for (vals, &zeta) in per_ray.iter().zip(rays) {
        let mut running: f64 = 0.0;
        for (k, &v) in vals.iter().enumerate() {
            running = running.max(v);
            levels[k] = levels[k].max(running);
        }
        if running > best {
            best = running;
            worst = zeta;
        }
    }
    SupEstimate::from_levels(levels, worst, th)
}

/// Fit of `||D_f(rho zeta)|| <= M ((1-rho)/(1-r))^{delta-1} ||D_f(r zeta)||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnFit {
    pub delta_hat: f64,
    #[serde(with = "extended_float")]
    pub m_hat: f64,
    pub worst_ray: Complex,
    pub worst_pair: (f64, f64),
    /// `(x, R)` for every ladder pair on the worst ray.
    pub violation_curve: Vec<(f64, f64)>,
    /// Unclipped exponent using ladder levels `0..=k`, for each `k`.
    pub delta_levels: Vec<f64>,
    /// True when the exponent was set to the clip floor.
    pub clipped: bool,
}

impl JohnFit {
    /// Rows `(x, ratio, bound)` of the violation curve.
    pub fn curve_rows(&self) -> Vec<Vec<f64>> {
        self.violation_curve
            .iter()
            .map(|&(x, r)| vec![x, r, self.m_hat * x.powf(self.delta_hat - 1.0)])
            .collect()
    }
}

struct FitPair {
    ray: usize,
    i: usize,
    j: usize,
    x: f64,
    ratio: f64,
}

/// With `x = (1-rho)/(1-r)` and `R = ||D_f(rho zeta)|| / ||D_f(r zeta)||`:
/// `delta = min(1, 1 + inf_{x < 1/2} ln R / ln x)`, floored at the clip, and
/// `M = sup R x^{1-delta}`.
pub fn criterion_fit(map: &HarmonicMap, rays: &[Complex64], ladder: &[f64], th: &Thresholds) -> Result<JohnFit> {
    let norms: Vec<Vec<f64>> = rays
        .par_iter()
        .map(|&zeta| ladder.iter().map(|&r| frame_at(map, zeta * r).map(|f| f.opnorm)).collect())
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for (ray, d) in norms.iter().enumerate() {
        for i in 0..ladder.len() {
            for j in i..ladder.len() {
                let x = (1.0 - ladder[j]) / (1.0 - ladder[i]);
                pairs.push(FitPair { ray, i, j, x, ratio: d[j] / d[i] });
            }
        }
    }
    let slope = |p: &FitPair| p.ratio.ln() / p.x.ln();
    let delta_levels: Vec<f64> = (0..ladder.len())
        .map(|k| {
            let inf = pairs.iter().filter(|p| p.j <= k && p.x < 0.5).map(slope).fold(f64::INFINITY, f64::min);
            (1.0 + inf).min(1.0)
        })
        .collect();
    let full = *delta_levels.last().unwrap_or(&1.0);
    let half = delta_levels.get(delta_levels.len().saturating_sub(1) / 2).copied().unwrap_or(1.0);
    let unsettled = !full.is_finite() || (full - half).abs() > th.refinement * half.abs();
    let clipped = unsettled || full <= th.delta_clip;
    let delta_hat = if clipped { th.delta_clip } else { full };

    let m_hat = pairs
        .iter()
        .map(|p| p.ratio * p.x.powf(1.0 - delta_hat))
        .reduce(f64::max)
        .unwrap_or(1.0);
    let worst_slope = pairs.iter().filter(|p| p.x < 0.5).min_by(|a, b| slope(a).total_cmp(&slope(b)));
    let (worst_ray, worst_pair) = match worst_slope {
        Some(p) => (rays[p.ray], (ladder[p.i], ladder[p.j])),
        None => (rays.first().copied().unwrap_or(Complex64::new(1.0, 0.0)), (0.0, 0.0)),
    };
    let ray_idx = worst_slope.map_or(0, |p| p.ray);
    let violation_curve = pairs.iter().filter(|p| p.ray == ray_idx).map(|p| (p.x, p.ratio)).collect();
    Ok(JohnFit {
        delta_hat,
        m_hat,
        worst_ray: worst_ray.into(),
        worst_pair,
        violation_curve,
        delta_levels,
        clipped,
    })
}

/// Box criterion: `sup diam f(B(z)) / d(f(z))` over `z = r zeta` on the ladder.
///
/// Boxes run out to the mesh radius `1 - geom.epsilon`, the same stand-in
/// for the unit circle that the distances use.
pub fn criterion_b_sup(
    map: &HarmonicMap,
    geom: &ImageGeometry,
    rays: &[Complex64],
    ladder: &[f64],
    box_m: usize,
    th: &Thresholds,
) -> Result<SupEstimate> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    let per_ray: Vec<Vec<f64>> = rays
        .par_iter()
        .map(|&zeta| {
            ladder
                .iter()
                .map(|&r| {
                    let z = zeta * r;
                    Ok(diam_image_of_box(map, z, box_m, geom.epsilon)? / dist_to_boundary(geom, map.eval(z)?)?)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(combine_rays(&per_ray, rays, th))
}

/// Bracket of the Pommerenke quantity
/// `sup_r sup_{w1,w2} l(gamma_r[w1,w2]) / d_{G_r}(w1,w2)`.
///
/// `d_{G_r}` lies between `|w1 - w2|` and the diameter of any connecting
/// curve inside `f(D_r)`; the image of the chord `[z1, z2]` is used. `lo`
/// is therefore the supremum of `l / diam f([z1, z2])` and `hi` that of
/// `l / |w1 - w2|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PommerenkeBracket {
    #[serde(with = "extended_float")]
    pub lo: f64,
    #[serde(with = "extended_float")]
    pub hi: f64,
    /// `(r, lo_r, hi_r)` per circle.
    pub per_radius: Vec<(f64, f64, f64)>,
}

const CHORD_SAMPLES: usize = 33;

/// `(lo_r, hi_r)` for one circle.
fn pommerenke_circle(map: &HarmonicMap, r: f64, n: usize) -> Result<(f64, f64)> {
    let thetas: Vec<f64> = (0..=n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let pieces: Vec<f64> = thetas
        .par_windows(2)
        .map(|w| {
            quad::integrate(|t| map.angular_derivative(r, t).map(|d| d.norm()), w[0], w[1], &[], 1e-10)
        })
        .collect::<Result<_>>()?;
    let mut cum = vec![0.0];
    for p in &pieces {
        cum.push(cum.last().unwrap() + p);
    }
    let total = cum[n];
    let pts: Vec<Complex64> = thetas[..n].iter().map(|&t| Complex64::from_polar(r, t)).collect();
    let img: Vec<Complex64> = pts.iter().map(|&z| map.eval(z)).collect::<Result<_>>()?;
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (mut lo, mut hi) = (0.0f64, 0.0f64);
            for j in i + 1..n {
                let arc = cum[j] - cum[i];
                let ell = arc.min(total - arc);
                let chord: Vec<Complex64> = (0..CHORD_SAMPLES)
                    .map(|s| {
                        let t = s as f64 / (CHORD_SAMPLES - 1) as f64;
                        map.eval(pts[i] + (pts[j] - pts[i]) * t)
                    })
                    .collect::<Result<_>>()?;
                let path = diameter(&chord);
                lo = lo.max(ell / path);
                hi = hi.max(ell / (img[j] - img[i]).norm());
            }
            Ok((lo, hi))
        })
        .collect::<Result<_>>()?;
    Ok(rows.iter().fold((0.0, 0.0), |(a, b), &(l, h)| (a.max(l), b.max(h))))
}

/// Bracket over the given circles with `points_per_circle` samples per circle
/// (every pair of samples is used). Circles of radius 0 are skipped.
pub fn pommerenke_interior(
    map: &HarmonicMap,
    radii: &[f64],
    points_per_circle: usize,
    th: &Thresholds,
) -> Result<PommerenkeBracket> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    let mut per_radius = Vec::new();
    for &r in radii.iter().filter(|&&r| r > 0.0) {
        if !(r < 1.0) {
            return Err(Error::Domain(format!("circle radius {r} not below 1")));
        }
        let (lo, hi) = pommerenke_circle(map, r, points_per_circle.max(2))?;
        per_radius.push((r, lo, hi));
    }
    let running = |pick: fn(&(f64, f64, f64)) -> f64| {
        let mut acc: f64 = 0.0;
        per_radius.iter().map(|row| {
            acc = acc.max(pick(row));
            acc
        }).collect::<Vec<f64>>()
    };
    let lo = settle(&running(|r| r.1), th);
    let hi = if lo.is_finite() { settle(&running(|r| r.2), th) } else { f64::INFINITY };
    Ok(PommerenkeBracket { lo, hi, per_radius })
}

/// Boundary-arc constant `32K(2e^{1+a} + 2M e^{1+a}/delta + M/delta)`.
pub fn lemma25_constant(k: f64, alpha: AlphaConfig, m: f64, delta: f64) -> f64 {
    let e = (1.0 + alpha.alpha).exp();
    32.0 * k * (2.0 * e + 2.0 * m * e / delta + m / delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma25Check {
    pub a: Complex,
    pub diam_arc: f64,
    pub constant: f64,
    pub dist: f64,
    /// `constant * dist - diam_arc`
    pub margin: f64,
    pub pass: bool,
}

/// Check `diam f(I(a)) <= M0' d(f(a))` with `M0'` from [`lemma25_constant`].
#[allow(clippy::too_many_arguments)]
pub fn check_lemma25(
    map: &HarmonicMap,
    geom: &ImageGeometry,
    a: Complex64,
    m: f64,
    delta: f64,
    k: f64,
    alpha: AlphaConfig,
) -> Result<Lemma25Check> {
    if !(delta > 0.0 && delta <= 1.0) || !(m > 0.0) {
        return Err(Error::ParamOutOfRange(format!("need M > 0 and delta in (0, 1], got ({m}, {delta})")));
    }
    let diam_arc = diam_image_of_arc(map, a, geom.epsilon, 513)?;
    let dist = dist_to_boundary(geom, map.eval(a)?)?;
    let constant = lemma25_constant(k, alpha, m, delta);
    let margin = constant * dist - diam_arc;
    Ok(Lemma25Check { a: a.into(), diam_arc, constant, dist, margin, pass: margin >= 0.0 })
}

/// `4cK^2/(1+K)`
pub fn tail_constant(c: f64, k: f64) -> f64 {
    4.0 * c * k * k / (1.0 + k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub r: f64,
    /// `int_r^1 ||D_f(t zeta)|| dt`
    pub t: f64,
    /// `int_r^1 (1-x) ||D_f(x zeta)||^2 dx`
    pub e: f64,
    /// `(1-r)^{-1/M0} T(r)`
    pub s: f64,
    /// `T(r) <= M0 (1-r) ||D_f(r zeta)||`
    pub t_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub m0: f64,
    pub rows: Vec<TailRow>,
    pub t_bound_holds: bool,
    pub s_nonincreasing: bool,
}

/// Tail integrals along `zeta`, truncated at `1 - epsilon` with the
/// rectangle estimate `epsilon ||D_f((1-epsilon) zeta)||` for the rest.
pub fn tail_diagnostics(
    map: &HarmonicMap,
    zeta: Complex64,
    ladder: &[f64],
    m0: f64,
    epsilon: f64,
) -> Result<TailReport> {
    if !map.flags.bounded_image {
        return Err(Error::DivergentTail);
    }
    let top = 1.0 - epsilon;
    if ladder.iter().any(|&r| !(0.0..top).contains(&r)) {
        return Err(Error::ParamOutOfRange(format!("ladder must lie in [0, {top})")));
    }
    let zeta = zeta / zeta.norm();
    let norm = |t: f64| frame_at(map, zeta * t).map(|f| f.opnorm);
    let d_top = norm(top)?;
    let rows: Vec<TailRow> = ladder
        .par_iter()
        .map(|&r| {
            let breaks = quad::dyadic_breaks(r, top);
            let t = quad::integrate(norm, r, top, &breaks, 1e-12)? + epsilon * d_top;
            let e = quad::integrate(|x| norm(x).map(|d| (1.0 - x) * d * d), r, top, &breaks, 1e-12)?
                + 0.5 * epsilon * epsilon * d_top * d_top;
            let d_r = norm(r)?;
            let s = (1.0 - r).powf(-1.0 / m0) * t;
            Ok(TailRow { r, t, e, s, t_bound: t <= m0 * (1.0 - r) * d_r * (1.0 + 1e-12) })
        })
        .collect::<Result<_>>()?;
    let t_bound_holds = rows.iter().all(|r| r.t_bound);
    let s_nonincreasing = rows.windows(2).all(|w| w[1].s <= w[0].s * (1.0 + 1e-12));
    if rows.iter().any(|r| !r.t.is_finite()) {
        return Err(Error::DivergentTail);
    }
    Ok(TailReport { m0, rows, t_bound_holds, s_nonincreasing })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundRecord {
    pub z: Complex,
    /// `(1-|z|^2) ||D_f(z)|| / d(f(z))`
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Per-sample check of `(1+K)/(2K) <= (1-|z|^2) ||D_f(z)|| / d(f(z)) <= 16K`
/// up to an absolute tolerance.
pub fn check_two_sided_frame_bound(
    map: &HarmonicMap,
    geom: &ImageGeometry,
    k: f64,
    samples: &[Complex64],
    tol: f64,
) -> Result<Vec<FrameBoundRecord>> {
    let (lower, upper) = ((1.0 + k) / (2.0 * k), 16.0 * k);
    samples
        .par_iter()
        .map(|&z| {
            let d = dist_to_boundary(geom, map.eval(z)?)?;
            let ratio = (1.0 - z.norm_sqr()) * frame_at(map, z)?.opnorm / d;
            let pass = ratio >= lower - tol && ratio <= upper + tol;
            Ok(FrameBoundRecord { z: z.into(), ratio, lower, upper, pass })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    JohnConsistent,
    JohnFailing,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::JohnConsistent => "john-consistent",
            Verdict::JohnFailing => "john-failing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Failing when the John constant or the box supremum is infinite or the
/// exponent fit hits the clip; consistent when every quantity is finite.
pub fn verdict(c: f64, m1: f64, fit: &JohnFit, mgamma_lo: f64) -> Verdict {
    if !c.is_finite() || !m1.is_finite() || fit.clipped {
        Verdict::JohnFailing
    } else if mgamma_lo.is_finite() && fit.m_hat.is_finite() {
        Verdict::JohnConsistent
    } else {
        Verdict::Inconclusive
    }
}

/// Sampling and threshold settings for a full John report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnConfig {
    /// Ladder `1 - 2^{-k}`, `k = 0..=ladder_depth`.
    pub ladder_depth: usize,
    pub rays: usize,
    /// Upper bound on the mesh offset; the mesh is pulled in to
    /// `(1 - r_last)/64` when the ladder goes deeper.
    pub epsilon: f64,
    pub mesh_vertices: usize,
    pub box_resolution: usize,
    /// Pommerenke circles `1 - 2^{-k}`, `k = 1..=pommerenke_depth`.
    pub pommerenke_depth: usize,
    pub points_per_circle: usize,
    pub alpha: f64,
    pub thresholds: Thresholds,
}

impl Default for JohnConfig {
    fn default() -> Self {
        Self {
            ladder_depth: 12,
            rays: 64,
            epsilon: 1e-3,
            mesh_vertices: 4096,
            box_resolution: 24,
            pommerenke_depth: 8,
            points_per_circle: 128,
            alpha: AlphaConfig::default().alpha,
            thresholds: Thresholds::default(),
        }
    }
}

impl JohnConfig {
    pub fn ladder(&self) -> Vec<f64> {
        dyadic_ladder(self.ladder_depth)
    }

    pub fn pommerenke_radii(&self) -> Vec<f64> {
        dyadic_ladder(self.pommerenke_depth)[1..].to_vec()
    }

    /// Mesh offset actually used: small enough that every ladder point maps inside the mesh.
    pub fn mesh_epsilon(&self) -> f64 {
        let last = 2f64.powi(-(self.ladder_depth as i32));
        self.epsilon.min(last / 64.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub ladder: Vec<f64>,
    pub rays: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub thresholds: Thresholds,
}

/// All John diagnostics for one map. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnReport {
    pub label: String,
    #[serde(with = "extended_float")]
    pub c: f64,
    #[serde(rename = "M1", with = "extended_float")]
    pub m1: f64,
    pub delta_hat: f64,
    #[serde(rename = "M_hat", with = "extended_float")]
    pub m_hat: f64,
    #[serde(rename = "Mgamma")]
    pub mgamma: [ExtFloat; 2],
    pub verdict: Verdict,
    pub config: ReportConfig,
}

/// A float serialized with infinities as strings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtFloat(#[serde(with = "extended_float")] pub f64);

/// Full set of John diagnostics with their level histories.
#[derive(Debug, Clone, PartialEq)]
pub struct JohnAnalysis {
    pub report: JohnReport,
    pub radial: SupEstimate,
    pub box_sup: SupEstimate,
    /// John constant and box supremum recomputed at half ladder depth.
    pub radial_half: f64,
    pub box_half: f64,
    pub fit: JohnFit,
    pub pommerenke: PommerenkeBracket,
    pub geometry: ImageGeometry,
}

fn mesh_quantities(map: &HarmonicMap, cfg: &JohnConfig, rays: &[Complex64]) -> Result<(SupEstimate, SupEstimate, ImageGeometry)> {
    let ladder = cfg.ladder();
    let geom = boundary_mesh(map, cfg.mesh_epsilon(), cfg.mesh_vertices)?;
    let th = &cfg.thresholds;
    let radial = radial_john_constant(map, &geom, rays, &ladder, th)?;
    let box_sup = criterion_b_sup(map, &geom, rays, &ladder, cfg.box_resolution, th)?;
    Ok((radial, box_sup, geom))
}

/// Run every John diagnostic with the given settings.
pub fn john_analysis(map: &HarmonicMap, cfg: &JohnConfig) -> Result<JohnAnalysis> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    let th = &cfg.thresholds;
    let rays = default_rays(map, cfg.rays);
    let (radial, box_sup, geom) = mesh_quantities(map, cfg, &rays)?;
    let half_cfg = JohnConfig { ladder_depth: cfg.ladder_depth / 2, ..cfg.clone() };
    let (radial_h, box_h, _) = mesh_quantities(map, &half_cfg, &rays)?;
    let c = refinement_rule(radial.value, radial_h.value, th);
    let m1 = refinement_rule(box_sup.value, box_h.value, th);
    let fit = criterion_fit(map, &rays, &cfg.ladder(), th)?;
    let pommerenke = pommerenke_interior(map, &cfg.pommerenke_radii(), cfg.points_per_circle, th)?;
    let report = JohnReport {
        label: map.label.clone(),
        c,
        m1,
        delta_hat: fit.delta_hat,
        m_hat: fit.m_hat,
        mgamma: [ExtFloat(pommerenke.lo), ExtFloat(pommerenke.hi)],
        verdict: verdict(c, m1, &fit, pommerenke.lo),
        config: ReportConfig {
            ladder: cfg.ladder(),
            rays: rays.len(),
            epsilon: geom.epsilon,
            alpha: cfg.alpha,
            thresholds: *th,
        },
    };
    Ok(JohnAnalysis {
        report,
        radial,
        box_sup,
        radial_half: radial_h.value,
        box_half: box_h.value,
        fit,
        pommerenke,
        geometry: geom,
    })
}

/// Quasiconformality constant on a moderate grid, used when a map carries no known `K`.
pub fn estimate_k(map: &HarmonicMap) -> Result<f64> {
    match map.flags.known_k {
        Some(k) => Ok(k),
        None => qc_constant(map, &PolarGrid::new(dyadic_ladder(10), 64)),
    }
}

/// CSV rows `(r_k, sup_k)` of a level history against the ladder.
pub fn level_rows(ladder: &[f64], levels: &[f64]) -> Vec<Vec<f64>> {
    ladder.iter().zip(levels).map(|(&r, &v)| vec![r, v]).collect()
}

/// Human-readable one-liner for a report.
pub fn summary_line(r: &JohnReport) -> String {
    format!(
        "{}: c={} M1={} delta={} M={} Mgamma=[{}, {}] -> {}",
        r.label,
        fmt_float(r.c),
        fmt_float(r.m1),
        fmt_float(r.delta_hat),
        fmt_float(r.m_hat),
        fmt_float(r.mgamma[0].0),
        fmt_float(r.mgamma[1].0),
        r.verdict.as_str()
    )
}
