//! Run orchestration: resolve a map, run the requested diagnostic suites and
//! write `report.json` plus CSV plot data into an output directory.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_z, Error, Result};
use crate::frame::{check_theorem_a, frame_at, qc_constant, theorem_b_exponent_fit, PolarGrid};
use crate::hardy::{
    beta_critical, coefficient_sum, energy_field, frame_norm_field, hardy_norm, integral_mean, varphi_series,
    CoefficientTable,
};
use crate::hyperbolic::{check_lemma23, check_lemma_b, check_two_point_sharp, lemma24_constant, AlphaConfig, PairMargin};
use crate::john::{
    check_lemma25, check_two_sided_frame_bound, default_rays, dyadic_ladder, estimate_k, john_analysis,
    level_rows, pommerenke_interior, tail_constant, tail_diagnostics, ExtFloat, JohnAnalysis, JohnConfig, JohnReport,
    Thresholds,
};
use crate::mapcore::{catalog_get, load_map_spec, ClassFlags, HarmonicMap, Params};
use crate::report::{extended_float, plot_csv, table_csv, Complex, PlotSeries};
use crate::schwarz::{rectifiability_check, schwarz_pick_check, schwarzian_data, theorem16_limsup, LimsupEstimate};

/// Where the map comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSource {
    Catalog {
        name: String,
        #[serde(default)]
        params: Params,
    },
    Spec {
        path: PathBuf,
    },
}

impl MapSource {
    /// Parse `name` or `name:key=value,key=value`; values are read as JSON when possible.
    pub fn parse_catalog(text: &str) -> Result<Self> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        if name.is_empty() {
            return Err(Error::Config("empty map name".into()));
        }
        let mut params = Params::default();
        for pair in rest.into_iter().flat_map(split_top_level) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("parameter `{pair}` is not key=value")))?;
            let value = serde_json::from_str(v).unwrap_or_else(|_| serde_json::Value::String(v.to_string()));
            params = params.with(k.trim(), value);
        }
        Ok(MapSource::Catalog { name: name.to_string(), params })
    }

    pub fn resolve(&self) -> Result<HarmonicMap> {
        match self {
            MapSource::Catalog { name, params } => catalog_get(name, params),
            MapSource::Spec { path } => load_map_spec(&fs::read(path)?),
        }
    }
}

/// Split on commas outside brackets, so `a=[0.3,0.1],b=2` has two parts.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Frame,
    John,
    Pommerenke,
    Schwarz,
    Hardy,
    Lemmas,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Frame, Suite::John, Suite::Pommerenke, Suite::Schwarz, Suite::Hardy, Suite::Lemmas];
}

fn default_suites() -> BTreeSet<Suite> {
    Suite::ALL.into_iter().collect()
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Everything a run needs; the JSON form is the config-file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub map: MapSource,
    #[serde(default = "default_suites")]
    pub suites: BTreeSet<Suite>,
    #[serde(default = "RunConfig::default_ladder_depth")]
    pub ladder_depth: usize,
    #[serde(default = "RunConfig::default_rays")]
    pub rays: usize,
    #[serde(default = "RunConfig::default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "RunConfig::default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

impl RunConfig {
    fn default_ladder_depth() -> usize {
        JohnConfig::default().ladder_depth
    }
    fn default_rays() -> usize {
        JohnConfig::default().rays
    }
    fn default_epsilon() -> f64 {
        JohnConfig::default().epsilon
    }
    fn default_alpha() -> f64 {
        AlphaConfig::default().alpha
    }

    /// Defaults for everything but the map.
    pub fn new(map: MapSource) -> Self {
        Self {
            map,
            suites: default_suites(),
            ladder_depth: Self::default_ladder_depth(),
            rays: Self::default_rays(),
            epsilon: Self::default_epsilon(),
            alpha: Self::default_alpha(),
            thresholds: Thresholds::default(),
            out: default_out(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::Config("at least one suite is required".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.05) {
            return Err(Error::Config(format!("epsilon {} outside (0, 0.05]", self.epsilon)));
        }
        if !(4..=20).contains(&self.ladder_depth) {
            return Err(Error::Config(format!("ladder depth {} outside [4, 20]", self.ladder_depth)));
        }
        if self.rays == 0 {
            return Err(Error::Config("ray count must be positive".into()));
        }
        AlphaConfig::new(self.alpha).map_err(|e| Error::Config(e.to_string()))?;
        let th = &self.thresholds;
        if !(th.growth > 1.0) || !(th.refinement > 0.0) || !(th.delta_clip > 0.0 && th.delta_clip < 1.0) {
            return Err(Error::Config(format!("invalid thresholds {th:?}")));
        }
        Ok(())
    }

    pub fn john_config(&self) -> JohnConfig {
        JohnConfig {
            ladder_depth: self.ladder_depth,
            rays: self.rays,
            epsilon: self.epsilon,
            alpha: self.alpha,
            thresholds: self.thresholds,
            ..JohnConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSummary {
    pub label: String,
    pub flags: ClassFlags,
    /// Largest local dilatation on the default grid.
    #[serde(with = "extended_float")]
    pub k_hat: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginSummary {
    pub samples: usize,
    #[serde(with = "extended_float")]
    pub min_lower: f64,
    #[serde(with = "extended_float")]
    pub min_upper: f64,
    pub pass: bool,
}

impl MarginSummary {
    fn from_pairs(it: impl Iterator<Item = (f64, f64, bool)>) -> Self {
        let mut s = Self { samples: 0, min_lower: f64::INFINITY, min_upper: f64::INFINITY, pass: true };
        for (lo, hi, pass) in it {
            s.samples += 1;
            s.min_lower = s.min_lower.min(lo);
            s.min_upper = s.min_upper.min(hi);
            s.pass &= pass;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSuite {
    pub samples: usize,
    /// Largest relative defect of `||D|| l(D) = |J|` and `K = (1+|w|)/(1-|w|)`.
    pub identity_defect: f64,
    /// `None` when `f` does not map the disk into itself.
    pub theorem_a: Option<MarginSummary>,
    #[serde(with = "extended_float")]
    pub lower_distortion_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnSuite {
    pub report: JohnReport,
    pub radial_levels: Vec<ExtFloat>,
    pub box_levels: Vec<ExtFloat>,
    pub radial_half: ExtFloat,
    pub box_half: ExtFloat,
    pub delta_levels: Vec<f64>,
    pub delta_clipped: bool,
    pub worst_ray: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PommerenkeSuite {
    pub lo: ExtFloat,
    pub hi: ExtFloat,
    /// `(r, lo_r, hi_r)`
    pub per_radius: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzSuite {
    pub limsup: LimsupEstimate,
    pub schwarz_pick: MarginSummary,
    pub rectifiable_rays: usize,
    pub rays: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalRow {
    pub r: f64,
    pub series: f64,
    pub quadrature: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRow {
    pub beta: f64,
    pub s_n: f64,
    pub convergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub n: usize,
    pub sums: Vec<SumRow>,
    pub beta_critical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySuite {
    /// `sup_r M_1(r, ||D_f||)`.
    pub norm: ExtFloat,
    pub means: Vec<(f64, f64)>,
    pub parseval: Vec<ParsevalRow>,
    pub coefficients: CoefficientReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDistortion {
    pub a: [f64; 3],
    pub constant: f64,
    /// Largest sampled `||D_f(z2)|| / ||D_f(z1)||` over admissible pairs.
    pub observed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcDiameter {
    pub samples: usize,
    /// Smallest `M0' d(f(a)) - diam f(I(a))`.
    pub min_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSummary {
    pub m0: f64,
    pub t_bound_holds: bool,
    pub s_nonincreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmasSuite {
    pub alpha: f64,
    /// `None` outside the normalized class.
    pub coefficient_bounds: Option<MarginSummary>,
    /// Two-point bound with exponent `1 + alpha`.
    pub two_point: Option<MarginSummary>,
    /// Two-point bound with exponent `2(1 + alpha)`.
    pub two_point_sharp: Option<MarginSummary>,
    pub box_distortion: BoxDistortion,
    /// The remaining entries need a bounded image and a finite criterion fit.
    pub arc_diameter: Option<ArcDiameter>,
    pub frame_bound: Option<MarginSummary>,
    pub tail: Option<TailSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub map: MapSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub john: Option<JohnSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pommerenke: Option<PommerenkeSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schwarz: Option<SchwarzSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hardy: Option<HardySuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmasSuite>,
    pub violations: Vec<String>,
    pub errors: Vec<String>,
    pub files: Vec<String>,
    pub exit_code: i32,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: RunReport,
    pub report_path: PathBuf,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_EVALUATION: i32 = 3;

/// Relative tolerance for the frame identities and the series identity.
pub const IDENTITY_TOL: f64 = 1e-12;
pub const PARSEVAL_TOL: f64 = 1e-8;
pub const COEFFICIENTS: usize = 256;
pub const SUM_BETAS: [f64; 3] = [0.1, 0.5, 1.0];
pub const LIMSUP_MARGIN: f64 = 0.05;
pub const LIMSUP_ANGLES: usize = 256;
/// Box parameters `(a1, a2, a3)` for the box distortion constant.
pub const BOX_PARAMS: [f64; 3] = [1.0, 2.0, 1.0];

struct Ctx<'a> {
    map: &'a HarmonicMap,
    cfg: &'a RunConfig,
    john: Option<JohnAnalysis>,
    violations: Vec<String>,
    files: Vec<(String, String)>,
}

impl Ctx<'_> {
    fn john(&mut self) -> Result<&JohnAnalysis> {
        if self.john.is_none() {
            self.john = Some(john_analysis(self.map, &self.cfg.john_config())?);
        }
        Ok(self.john.as_ref().expect("just set"))
    }

    fn file(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }
}

fn frame_suite(ctx: &mut Ctx) -> Result<FrameSuite> {
    let map = ctx.map;
    let pts = PolarGrid::default_grid().points();
    let mut defect = 0.0f64;
    for &z in &pts {
        let fr = frame_at(map, z)?;
        let j = fr.jacobian.abs();
        if j > 0.0 {
            defect = defect.max((fr.opnorm * fr.lnorm - j).abs() / j);
        }
        if let (Some(w), Some(k)) = (fr.dilatation, fr.local_k) {
            if k.is_finite() {
                let w = w.norm();
                defect = defect.max((k - (1.0 + w) / (1.0 - w)).abs() / k);
            }
        }
    }
    if defect > IDENTITY_TOL {
        ctx.violations.push(format!("frame: identity defect {defect:e}"));
    }
    let self_map = pts.iter().map(|&z| map.eval(z)).collect::<Result<Vec<_>>>()?.iter().all(|w| w.norm() < 1.0);
    let theorem_a = if self_map {
        let k = estimate_k(map)?;
        let recs = check_theorem_a(map, k, &pts, 1e-10)?;
        let s = MarginSummary::from_pairs(recs.iter().map(|r| (r.lower, r.upper, r.pass)));
        if !s.pass {
            ctx.violations.push(format!("frame: self-map distortion bound fails (min margins {:e}, {:e})", s.min_lower, s.min_upper));
        }
        Some(s)
    } else {
        None
    };
    let rays = default_rays(map, 16);
    let exponent = theorem_b_exponent_fit(map, &rays, &dyadic_ladder(ctx.cfg.ladder_depth))?;
    Ok(FrameSuite { samples: pts.len(), identity_defect: defect, theorem_a, lower_distortion_exponent: exponent })
}

fn john_suite(ctx: &mut Ctx) -> Result<JohnSuite> {
    let ladder = ctx.cfg.john_config().ladder();
    let a = ctx.john()?;
    let ext = |v: &[f64]| v.iter().map(|&x| ExtFloat(x)).collect::<Vec<_>>();
    let suite = JohnSuite {
        report: a.report.clone(),
        radial_levels: ext(&a.radial.levels),
        box_levels: ext(&a.box_sup.levels),
        radial_half: ExtFloat(a.radial_half),
        box_half: ExtFloat(a.box_half),
        delta_levels: a.fit.delta_levels.clone(),
        delta_clipped: a.fit.clipped,
        worst_ray: a.fit.worst_ray,
    };
    let levels: Vec<Vec<f64>> = level_rows(&ladder, &a.radial.levels)
        .into_iter()
        .zip(&a.box_sup.levels)
        .map(|(mut row, &b)| {
            row.push(b);
            row
        })
        .collect();
    let curve = table_csv(&["x", "ratio", "bound"], &a.fit.curve_rows());
    let mesh = a.geometry.to_csv();
    ctx.file("john_levels.csv", table_csv(&["r", "radial", "box"], &levels));
    ctx.file("violation_curve.csv", curve);
    ctx.file("boundary_mesh.csv", mesh);
    Ok(suite)
}

fn pommerenke_suite(ctx: &mut Ctx) -> Result<PommerenkeSuite> {
    let jc = ctx.cfg.john_config();
    let bracket = match &ctx.john {
        Some(a) => a.pommerenke.clone(),
        None => pommerenke_interior(ctx.map, &jc.pommerenke_radii(), jc.points_per_circle, &jc.thresholds)?,
    };
    let rows: Vec<Vec<f64>> = bracket.per_radius.iter().map(|&(r, lo, hi)| vec![r, lo, hi]).collect();
    ctx.file("pommerenke.csv", table_csv(&["r", "lo", "hi"], &rows));
    Ok(PommerenkeSuite { lo: ExtFloat(bracket.lo), hi: ExtFloat(bracket.hi), per_radius: bracket.per_radius })
}

fn schwarz_suite(ctx: &mut Ctx) -> Result<SchwarzSuite> {
    let map = ctx.map;
    let ladder = dyadic_ladder(ctx.cfg.ladder_depth);
    let limsup = theorem16_limsup(map, &ladder[1..], LIMSUP_ANGLES, LIMSUP_MARGIN)?;
    if map.is_conformal() {
        let z = Complex64::new(0.3, 0.2);
        let d = schwarzian_data(map, z)?;
        if (d.pf - d.th).norm() > IDENTITY_TOL * d.th.norm().max(1.0) {
            ctx.violations.push(format!("schwarz: pre-Schwarzian differs from h''/h' at {}", fmt_z(z)));
        }
    }
    let pts = PolarGrid::new(ladder[..ladder.len() - 1].to_vec(), 32).points();
    let recs = schwarz_pick_check(map, &pts)?;
    let pick = MarginSummary::from_pairs(recs.iter().map(|r| (r.lower, r.upper, r.pass)));
    if !pick.pass {
        ctx.violations.push(format!("schwarz: dilatation exceeds the Schwarz-Pick bound (min slack {:e})", pick.min_upper));
    }
    let rays = default_rays(map, ctx.cfg.rays.min(16));
    let lengths = rectifiability_check(map, &rays, &ladder[1..])?;
    ctx.file("circle_maxima.csv", plot_csv(&PlotSeries::new("max", limsup.maxima.clone())));
    Ok(SchwarzSuite {
        limsup,
        schwarz_pick: pick,
        rectifiable_rays: lengths.iter().filter(|l| l.finite).count(),
        rays: lengths.len(),
    })
}

/// Coefficient sums at [`SUM_BETAS`] and the critical exponent.
pub fn coefficient_report(map: &HarmonicMap, n: usize) -> Result<(CoefficientReport, CoefficientTable)> {
    let table = CoefficientTable::from_map(map, n)?;
    let sums = SUM_BETAS
        .iter()
        .map(|&beta| {
            let s = coefficient_sum(&table, beta);
            SumRow { beta, s_n: s.partial.last().map_or(0.0, |p| p.1), convergent: s.convergent }
        })
        .collect();
    Ok((CoefficientReport { n, sums, beta_critical: beta_critical(&table) }, table))
}

fn hardy_suite(ctx: &mut Ctx) -> Result<HardySuite> {
    let map = ctx.map;
    let ladder = dyadic_ladder(ctx.cfg.ladder_depth);
    let norm = hardy_norm(frame_norm_field(map), 1.0, &ladder[1..], &ctx.cfg.thresholds)?;
    let mut parseval = Vec::new();
    for r in [0.25, 0.5, 0.75] {
        let series = varphi_series(map, r)?.value;
        let quadrature = integral_mean(energy_field(map), 1.0, r)?;
        let relative_error = (series - quadrature).abs() / quadrature;
        if relative_error > PARSEVAL_TOL {
            ctx.violations.push(format!("hardy: series and circle mean differ by {relative_error:e} at r = {r}"));
        }
        parseval.push(ParsevalRow { r, series, quadrature, relative_error });
    }
    let (coefficients, table) = coefficient_report(map, COEFFICIENTS)?;
    let sums: Vec<Vec<f64>> = {
        let per_beta: Vec<_> = SUM_BETAS.iter().map(|&b| coefficient_sum(&table, b).partial).collect();
        (0..per_beta[0].len())
            .map(|i| {
                let mut row = vec![per_beta[0][i].0 as f64];
                row.extend(per_beta.iter().map(|p| p[i].1));
                row
            })
            .collect()
    };
    let header: Vec<String> = SUM_BETAS.iter().map(|b| format!("S(beta={b})")).collect();
    let mut cols = vec!["N"];
    cols.extend(header.iter().map(String::as_str));
    ctx.file("hardy_means.csv", plot_csv(&PlotSeries::new("M1", norm.means.clone())));
    ctx.file("coefficient_sums.csv", table_csv(&cols, &sums));
    Ok(HardySuite { norm: ExtFloat(norm.value), means: norm.means, parseval, coefficients })
}

fn box_distortion(map: &HarmonicMap, alpha: AlphaConfig, depth: usize) -> Result<BoxDistortion> {
    let [a1, a2, a3] = BOX_PARAMS;
    let constant = lemma24_constant(a1, a2, a3, alpha)?;
    let mut observed = 0.0f64;
    for &r1 in &dyadic_ladder(depth.min(10))[1..] {
        let d1 = 1.0 - r1;
        for j in 0..16 {
            let t1 = 2.0 * PI * j as f64 / 16.0;
            let n1 = frame_at(map, Complex64::from_polar(r1, t1))?.opnorm;
            for s in [a1, 0.5 * (a1 + a2), a2] {
                let r2 = 1.0 - s * d1;
                if r2 <= 0.0 {
                    continue;
                }
                for u in [-a3, 0.0, a3] {
                    let n2 = frame_at(map, Complex64::from_polar(r2, t1 + u * d1))?.opnorm;
                    observed = observed.max(n2 / n1).max(n1 / n2);
                }
            }
        }
    }
    Ok(BoxDistortion { a: BOX_PARAMS, constant, observed, pass: observed <= constant })
}

fn lemmas_suite(ctx: &mut Ctx) -> Result<LemmasSuite> {
    let map = ctx.map;
    let alpha = AlphaConfig::new(ctx.cfg.alpha)?;
    let grid = PolarGrid::new(vec![0.0, 0.5, 0.9, 0.99], 32).points();
    let (coefficient_bounds, two_point, two_point_sharp) = if map.flags.in_sh0 {
        let b = check_lemma_b(map, alpha, &grid)?;
        let pairs: Vec<(Complex64, Complex64)> = grid
            .iter()
            .flat_map(|&z| {
                [0.3, 0.95].map(|r2| (z, Complex64::from_polar(r2, z.arg() + 0.5)))
            })
            .collect();
        let summary = |p: Vec<PairMargin>| MarginSummary::from_pairs(p.iter().map(|r| (r.lower, r.upper, r.pass)));
        (
            Some(MarginSummary::from_pairs(b.iter().map(|r| (r.lower, r.upper, r.pass)))),
            Some(summary(check_lemma23(map, alpha, &pairs)?)),
            Some(summary(check_two_point_sharp(map, alpha, &pairs)?)),
        )
    } else {
        (None, None, None)
    };
    let box_distortion = box_distortion(map, alpha, ctx.cfg.ladder_depth)?;
    let (mut arc_diameter, mut frame_bound, mut tail) = (None, None, None);
    if map.flags.bounded_image {
        let k = estimate_k(map)?;
        let eps = ctx.cfg.john_config().mesh_epsilon();
        let a = ctx.john()?;
        let (c, geom, fit) = (a.report.c, a.geometry.clone(), a.fit.clone());
        if !fit.clipped && fit.m_hat.is_finite() {
            let mut checks = Vec::new();
            for r in [0.5, 0.75, 0.875] {
                for zeta in default_rays(map, 8) {
                    checks.push(check_lemma25(map, &geom, zeta * r, fit.m_hat, fit.delta_hat, k, alpha)?);
                }
            }
            arc_diameter = Some(ArcDiameter {
                samples: checks.len(),
                min_margin: checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min),
                pass: checks.iter().all(|c| c.pass),
            });
        }
        let pts = PolarGrid::uniform(32, 0.95, 64).points();
        let recs = check_two_sided_frame_bound(map, &geom, k, &pts, 0.05)?;
        frame_bound = Some(MarginSummary::from_pairs(
            recs.iter().map(|r| (r.ratio - r.lower, r.upper - r.ratio, r.pass)),
        ));
        if c.is_finite() {
            let m0 = tail_constant(c, k);
            let ladder = dyadic_ladder(ctx.cfg.ladder_depth);
            let t = tail_diagnostics(map, Complex64::new(1.0, 0.0), &ladder, m0, eps)?;
            let rows: Vec<Vec<f64>> = t.rows.iter().map(|r| vec![r.r, r.t, r.e, r.s]).collect();
            ctx.file("tail.csv", table_csv(&["r", "T", "E", "S"], &rows));
            tail = Some(TailSummary { m0, t_bound_holds: t.t_bound_holds, s_nonincreasing: t.s_nonincreasing });
        }
    }
    Ok(LemmasSuite {
        alpha: alpha.alpha,
        coefficient_bounds,
        two_point,
        two_point_sharp,
        box_distortion,
        arc_diameter,
        frame_bound,
        tail,
    })
}

fn record<T>(r: Result<T>, name: &str, violations: &mut Vec<String>, errors: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::InvariantViolation(m)) => {
            violations.push(format!("{name}: {m}"));
            None
        }
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            None
        }
    }
}

/// Run the configured suites and write `report.json` and CSV files into `config.out`.
///
/// Suite failures are recorded in the report; the returned exit code is
/// 0 on completion, 2 when an invariant is violated and 3 on evaluation errors.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let map = config.map.resolve()?;
    fs::create_dir_all(&config.out)?;
    let k_hat = qc_constant(&map, &PolarGrid::default_grid()).unwrap_or(f64::INFINITY);
    let mut ctx = Ctx { map: &map, cfg: config, john: None, violations: Vec::new(), files: Vec::new() };
    let mut errors = Vec::new();
    let mut report = RunReport {
        config: config.clone(),
        map: MapSummary { label: map.label.clone(), flags: map.flags.clone(), k_hat },
        frame: None,
        john: None,
        pommerenke: None,
        schwarz: None,
        hardy: None,
        lemmas: None,
        violations: Vec::new(),
        errors: Vec::new(),
        files: Vec::new(),
        exit_code: EXIT_OK,
    };
    for suite in Suite::ALL.into_iter().filter(|s| config.suites.contains(s)) {
        let mut v = Vec::new();
        match suite {
            Suite::Frame => report.frame = record(frame_suite(&mut ctx), "frame", &mut v, &mut errors),
            Suite::John => report.john = record(john_suite(&mut ctx), "john", &mut v, &mut errors),
            Suite::Pommerenke => {
                report.pommerenke = record(pommerenke_suite(&mut ctx), "pommerenke", &mut v, &mut errors)
            }
            Suite::Schwarz => report.schwarz = record(schwarz_suite(&mut ctx), "schwarz", &mut v, &mut errors),
            Suite::Hardy => report.hardy = record(hardy_suite(&mut ctx), "hardy", &mut v, &mut errors),
            Suite::Lemmas => report.lemmas = record(lemmas_suite(&mut ctx), "lemmas", &mut v, &mut errors),
        }
        ctx.violations.extend(v);
    }
    for (name, body) in &ctx.files {
        fs::write(config.out.join(name), body)?;
    }
    report.files = ctx.files.iter().map(|f| f.0.clone()).collect();
    report.exit_code = if !ctx.violations.is_empty() {
        EXIT_VIOLATION
    } else if !errors.is_empty() {
        EXIT_EVALUATION
    } else {
        EXIT_OK
    };
    report.violations = ctx.violations;
    report.errors = errors;
    let report_path = config.out.join("report.json");
    write_report(&report, &report_path)?;
    Ok(RunOutcome { exit_code: report.exit_code, report, report_path })
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(map: &str, suites: &[Suite], out: &Path) -> RunConfig {
        RunConfig {
            suites: suites.iter().copied().collect(),
            out: out.to_path_buf(),
            ..RunConfig::new(MapSource::parse_catalog(map).unwrap())
        }
    }

    #[test]
    fn parse_map_sources() {
        let m = MapSource::parse_catalog("affine:a=0.5").unwrap();
        assert_eq!(m, MapSource::Catalog { name: "affine".into(), params: Params::from_pairs([("a", 0.5)]) });
        let m = MapSource::parse_catalog("analytic:expr=automorphism,a=[0.3,0.1]").unwrap();
        let f = m.resolve().unwrap();
        assert!(f.label.starts_with("automorphism"));
        assert!(MapSource::parse_catalog("").is_err());
        assert!(MapSource::parse_catalog("affine:a").is_err());
    }

    #[test]
    fn config_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg("identity", &[Suite::Frame], dir.path());
        assert!(c.validate().is_ok());
        c.epsilon = 0.1;
        assert!(matches!(run(&c), Err(Error::Config(_))));
        c.epsilon = 1e-3;
        c.ladder_depth = 3;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.ladder_depth = 12;
        c.suites.clear();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn config_json_roundtrip() {
        let text = r#"{"map": {"catalog": {"name": "affine", "params": {"a": 0.5}}}, "suites": ["john"], "epsilon": 0.002}"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.suites.len(), 1);
        assert_eq!((c.epsilon, c.ladder_depth, c.alpha), (0.002, 12, 2.5));
        let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(RunConfig::from_json(r#"{"map": {"catalog": {"name": "identity"}}, "bogus": 1}"#).is_err());
    }

    #[test]
    fn unbounded_john_is_evaluation_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&cfg("analytic:expr=koebe", &[Suite::John], dir.path())).unwrap();
        assert_eq!(out.exit_code, EXIT_EVALUATION);
        assert!(out.report.john.is_none() && out.report.errors.len() == 1);
    }

    #[test]
    fn frame_suite_identity() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&cfg("identity", &[Suite::Frame], dir.path())).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        let f = out.report.frame.unwrap();
        assert_eq!(f.identity_defect, 0.0);
        let a = f.theorem_a.unwrap();
        assert!(a.pass && a.min_lower.abs() < 1e-12 && a.min_upper.abs() < 1e-12);
        let text = fs::read_to_string(out.report_path).unwrap();
        assert!(text.starts_with("{\n  \"config\""));
    }
}
