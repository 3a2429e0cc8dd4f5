//! Image-side geometry: a polyline approximation of the image boundary,
//! distances to it, radial arclength, diameters of image sets and areas.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{fmt_z, Error, Result};
use crate::frame::frame_at;
use crate::mapcore::HarmonicMap;
use crate::quad;
use crate::report::fmt_float;

pub const MAX_MESH_VERTICES: usize = 1 << 20;
pub const MIN_MESH_VERTICES: usize = 512;
/// Relative tolerance of the arclength quadrature.
pub const ARCLENGTH_TOL: f64 = 1e-9;
/// Default relative cutoff: the box `B(z)` ends at radius `1 - (1-|z|)/BOX_CLIP`.
pub const BOX_CLIP: f64 = 256.0;

/// Distance from the unit circle at which the box `B(z)` is cut off by default.
pub fn relative_box_clip(z: Complex64) -> f64 {
    (1.0 - z.norm()) / BOX_CLIP
}

/// Axis-aligned rectangle `[min_re, max_re] x [min_im, max_im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl BoundingBox {
    fn of(points: &[Complex64]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            min[0] = min[0].min(p.re);
            min[1] = min[1].min(p.im);
            max[0] = max[0].max(p.re);
            max[1] = max[1].max(p.im);
        }
        Self { min, max }
    }

    pub fn diagonal(&self) -> f64 {
        (self.max[0] - self.min[0]).hypot(self.max[1] - self.min[1])
    }
}

/// Closed polyline `f((1-eps) e^{i theta_j})` standing in for the image boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageGeometry {
    pub thetas: Vec<f64>,
    pub boundary: Vec<Complex64>,
    pub epsilon: f64,
    /// `+1` for counterclockwise traversal.
    pub orientation: i8,
    pub bounding_box: BoundingBox,
}

/// Polyline at radius `1 - epsilon`, starting from `n` equispaced angles and
/// bisecting any edge longer than `diag/256` or bending away from its chord.
pub fn boundary_mesh(map: &HarmonicMap, epsilon: f64, n: usize) -> Result<ImageGeometry> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    if !(epsilon > 0.0 && epsilon <= 0.05) {
        return Err(Error::ParamOutOfRange(format!("epsilon = {epsilon} not in (0, 0.05]")));
    }
    if n < MIN_MESH_VERTICES {
        return Err(Error::ParamOutOfRange(format!("n = {n} < {MIN_MESH_VERTICES}")));
    }
    let rho = 1.0 - epsilon;
    let at = |t: f64| map.eval(Complex64::from_polar(rho, t));
    let coarse: Vec<(f64, Complex64)> = (0..=n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            at(t).map(|w| (t, w))
        })
        .collect::<Result<_>>()?;
    let diag = BoundingBox::of(&coarse.iter().map(|p| p.1).collect::<Vec<_>>()).diagonal();
    let max_edge = diag / 256.0;
    let max_sag = diag / 4096.0;

    let mut thetas = Vec::with_capacity(2 * n);
    let mut boundary = Vec::with_capacity(2 * n);
    for w in coarse.windows(2) {
        // depth-first bisection keeps the output ordered by angle
        let mut stack = vec![(w[0], w[1])];
        while let Some(((t0, w0), (t1, w1))) = stack.pop() {
            let tm = 0.5 * (t0 + t1);
            let wm = at(tm)?;
            let chord = w1 - w0;
            let sag = if chord.norm() > 0.0 {
                ((wm - w0) * chord.conj()).im.abs() / chord.norm()
            } else {
                (wm - w0).norm()
            };
            let split = (chord.norm() > max_edge || sag > max_sag) && t1 - t0 > 1e-13;
            if split {
                stack.push(((tm, wm), (t1, w1)));
                stack.push(((t0, w0), (tm, wm)));
            } else {
                thetas.push(t0);
                boundary.push(w0);
                if boundary.len() > MAX_MESH_VERTICES {
                    return Err(Error::RefinementOverflow(MAX_MESH_VERTICES));
                }
            }
        }
    }
    let area2: f64 = (0..boundary.len())
        .map(|i| {
            let (a, b) = (boundary[i], boundary[(i + 1) % boundary.len()]);
            a.re * b.im - a.im * b.re
        })
        .sum();
    let bounding_box = BoundingBox::of(&boundary);
    Ok(ImageGeometry { thetas, boundary, epsilon, orientation: if area2 >= 0.0 { 1 } else { -1 }, bounding_box })
}

impl ImageGeometry {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.boundary.len();
        (0..n).map(move |i| (self.boundary[i], self.boundary[(i + 1) % n]))
    }

    /// Winding number of the polyline around `w`.
    pub fn winding_number(&self, w: Complex64) -> i32 {
        let mut wn = 0;
        for (a, b) in self.edges() {
            let cross = (b.re - a.re) * (w.im - a.im) - (w.re - a.re) * (b.im - a.im);
            if a.im <= w.im {
                if b.im > w.im && cross > 0.0 {
                    wn += 1;
                }
            } else if b.im <= w.im && cross < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn contains(&self, w: Complex64) -> bool {
        self.winding_number(w) != 0
    }

    /// Distance from `w` to the polyline, ignoring the inside test.
    pub fn distance_to_polyline(&self, w: Complex64) -> f64 {
        self.edges().map(|(a, b)| segment_distance(w, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Longest mesh edge; bounds the error of polyline distances.
    pub fn max_edge(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).fold(0.0, f64::max)
    }

    /// CSV with columns `theta,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for (t, w) in self.thetas.iter().zip(&self.boundary) {
            let _ = writeln!(out, "{},{},{}", fmt_float(*t), fmt_float(w.re), fmt_float(w.im));
        }
        out
    }
}

fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + d * t)).norm()
}

/// Euclidean distance from an interior point `w` to the meshed boundary.
pub fn dist_to_boundary(geom: &ImageGeometry, w: Complex64) -> Result<f64> {
    if !geom.contains(w) {
        return Err(Error::OutsideDomain(fmt_z(w)));
    }
    Ok(geom.distance_to_polyline(w))
}

/// `int_{r0}^{r1} |d/dt f(t zeta)| dt`.
pub fn radial_arclength(map: &HarmonicMap, zeta: Complex64, r0: f64, r1: f64) -> Result<f64> {
    if !(0.0 <= r0 && r0 <= r1 && r1 < 1.0) {
        return Err(Error::ParamOutOfRange(format!("need 0 <= r0 <= r1 < 1, got [{r0}, {r1}]")));
    }
    let zeta = zeta / zeta.norm();
    quad::integrate(
        |t| map.radial_derivative(t, zeta).map(|d| d.norm()),
        r0,
        r1,
        &quad::dyadic_breaks(r0, r1),
        ARCLENGTH_TOL,
    )
}

/// Radial arclengths from `ladder[0]` to every ladder radius along `zeta`.
pub fn cumulative_arclength(map: &HarmonicMap, zeta: Complex64, ladder: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ladder.len());
    let mut acc = 0.0;
    for (i, &r) in ladder.iter().enumerate() {
        if i > 0 {
            acc += radial_arclength(map, zeta, ladder[i - 1], r)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Sample points of the box `B(z)` cut off at radius `1 - outer_eps`:
/// `m` radii from `|z|` outwards, geometric in the distance to the circle, and
/// `2m - 1` angles across `|arg zeta - arg z| <= pi (1 - |z|)`.
pub fn box_samples(z: Complex64, m: usize, outer_eps: f64) -> Vec<Complex64> {
    let r = z.norm();
    let gap = (1.0 - r).max(f64::MIN_POSITIVE);
    let ratio = (outer_eps / gap).min(1.0);
    let half = PI * (1.0 - r);
    let arg = z.arg();
    let na = 2 * m - 1;
    let mut pts = Vec::with_capacity(m * na);
    for i in 0..m {
        let s = i as f64 / (m - 1) as f64;
        let rho = (1.0 - gap * ratio.powf(s)).max(r);
        for j in 0..na {
            let t = arg - half + 2.0 * half * j as f64 / (na - 1) as f64;
            pts.push(Complex64::from_polar(rho, t));
        }
    }
    pts
}

/// Diameter of the sampled image `f(B(z))`, the box cut off at radius `1 - outer_eps`.
pub fn diam_image_of_box(map: &HarmonicMap, z: Complex64, m: usize, outer_eps: f64) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(fmt_z(z)));
    }
    if m < 16 {
        return Err(Error::ParamOutOfRange(format!("box resolution m = {m} < 16")));
    }
    if !(outer_eps > 0.0) {
        return Err(Error::ParamOutOfRange(format!("box cutoff {outer_eps} must be positive")));
    }
    let img: Vec<Complex64> = box_samples(z, m, outer_eps).iter().map(|&p| map.eval(p)).collect::<Result<_>>()?;
    Ok(diameter(&img))
}

/// Diameter of `f` over the arc `|arg zeta - arg a| <= 1 - |a|` at radius `1 - epsilon`.
pub fn diam_image_of_arc(map: &HarmonicMap, a: Complex64, epsilon: f64, m: usize) -> Result<f64> {
    if !map.flags.bounded_image {
        return Err(Error::UnboundedImage);
    }
    let r = a.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("need 0 < |a| < 1, got {}", fmt_z(a))));
    }
    let half = 1.0 - r;
    let rho = 1.0 - epsilon;
    let img: Vec<Complex64> = (0..m.max(2))
        .map(|j| {
            let t = a.arg() - half + 2.0 * half * j as f64 / (m.max(2) - 1) as f64;
            map.eval(Complex64::from_polar(rho, t))
        })
        .collect::<Result<_>>()?;
    Ok(diameter(&img))
}

/// Convex hull (counterclockwise, no collinear points) by the monotone chain.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Largest pairwise distance, attained between hull vertices.
pub fn diameter(points: &[Complex64]) -> f64 {
    let hull = convex_hull(points);
    if hull.len() > 4096 {
        return calipers(&hull);
    }
    diameter_brute(&hull)
}

/// Rotating calipers on a strictly convex counterclockwise hull.
fn calipers(hull: &[Complex64]) -> f64 {
    let n = hull.len();
    let area = |i: usize, j: usize, k: usize| {
        let (a, b, c) = (hull[i], hull[j], hull[k]);
        ((b - a).re * (c - a).im - (b - a).im * (c - a).re).abs()
    };
    let mut best: f64 = 0.0;
    let mut j = 1;
    for i in 0..n {
        let i1 = (i + 1) % n;
        while area(i, i1, (j + 1) % n) > area(i, i1, j) {
            j = (j + 1) % n;
        }
        best = best.max((hull[i] - hull[j]).norm()).max((hull[i1] - hull[j]).norm());
    }
    best
}

/// Largest pairwise distance by brute force.
pub fn diameter_brute(points: &[Complex64]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Subsets of the disk over which Jacobian areas are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Empty,
    /// `|z| < radius`
    Disk { radius: f64 },
    /// `{(x + iy) e^{i theta}: r <= x < 1, 0 <= y <= 1 - x}`
    Corner { r: f64, theta: f64 },
    /// The box `B(z)` cut off at radius `1 - outer_eps`.
    Box { z: [f64; 2], outer_eps: f64 },
}

/// Midpoint-rule integral of the Jacobian over `region` with `n x n` cells.
pub fn region_area(map: &HarmonicMap, region: Region, n: usize) -> Result<f64> {
    let jac = |z: Complex64| frame_at(map, z).map(|f| f.jacobian);
    let n = n.max(1);
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mid = |k: usize| (k as f64 + 0.5) / n as f64;
    let parts: Vec<f64> = match region {
        Region::Empty => return Ok(0.0),
        Region::Disk { radius } => {
            if !(radius > 0.0 && radius < 1.0) {
                return Err(Error::ParamOutOfRange(format!("disk radius {radius}")));
            }
            let (dr, dt) = (radius / n as f64, 2.0 * PI / n as f64);
            cells
                .par_iter()
                .map(|&(i, j)| {
                    let rho = radius * mid(i);
                    jac(Complex64::from_polar(rho, 2.0 * PI * mid(j))).map(|v| v * rho * dr * dt)
                })
                .collect::<Result<_>>()?
        }
        Region::Corner { r, theta } => {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::ParamOutOfRange(format!("corner base r = {r}")));
            }
            let rot = Complex64::from_polar(1.0, theta);
            cells
                .par_iter()
                .map(|&(i, j)| {
                    let x = r + (1.0 - r) * mid(i);
                    let y = (1.0 - x) * mid(j);
                    let w = (1.0 - r) * (1.0 - x) / (n * n) as f64;
                    jac(Complex64::new(x, y) * rot).map(|v| v * w)
                })
                .collect::<Result<_>>()?
        }
        Region::Box { z, outer_eps } => {
            let z = Complex64::new(z[0], z[1]);
            let r = z.norm();
            if !(r < 1.0) {
                return Err(Error::Domain(fmt_z(z)));
            }
            let outer = (1.0 - outer_eps).max(r);
            let half = PI * (1.0 - r);
            let (dr, dt) = ((outer - r) / n as f64, 2.0 * half / n as f64);
            cells
                .par_iter()
                .map(|&(i, j)| {
                    let rho = r + (outer - r) * mid(i);
                    let t = z.arg() - half + 2.0 * half * mid(j);
                    jac(Complex64::from_polar(rho, t)).map(|v| v * rho * dr * dt)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(parts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcore::{catalog_get, Params};

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity() -> HarmonicMap {
        catalog_get("identity", &Params::default()).unwrap()
    }

    fn affine(a: f64) -> HarmonicMap {
        catalog_get("affine", &Params::from_pairs([("a", a)])).unwrap()
    }

    #[test]
    fn identity_mesh_is_a_circle() {
        let g = boundary_mesh(&identity(), 1e-3, 1024).unwrap();
        assert!(g.len() >= 1024);
        assert_eq!(g.orientation, 1);
        assert!(g.boundary.iter().all(|w| (w.norm() - 0.999).abs() < 1e-14));
    }

    #[test]
    fn affine_mesh_is_an_ellipse() {
        let eps = 1e-3;
        let g = boundary_mesh(&affine(0.5), eps, 1024).unwrap();
        for w in &g.boundary {
            let e = (w.re / (1.5 * (1.0 - eps))).powi(2) + (w.im / (0.5 * (1.0 - eps))).powi(2);
            assert!((e - 1.0).abs() < 1e-12);
        }
        let d = dist_to_boundary(&g, z(0.0, 0.0)).unwrap();
        assert!((d - 0.5 * (1.0 - eps)).abs() < 1e-4, "{d}");
    }

    #[test]
    fn mesh_preconditions() {
        let k = catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap();
        assert_eq!(boundary_mesh(&k, 1e-3, 1024), Err(Error::UnboundedImage));
        assert!(matches!(boundary_mesh(&identity(), 0.1, 1024), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(boundary_mesh(&identity(), 1e-3, 100), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn identity_distances() {
        let g = boundary_mesh(&identity(), 1e-3, 1024).unwrap();
        let d = dist_to_boundary(&g, z(0.3, 0.0)).unwrap();
        assert!((d - 0.699).abs() < 1e-5, "{d}");
        assert!(matches!(dist_to_boundary(&g, z(2.0, 0.0)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn lune_mesh_resolves_horns() {
        let l = catalog_get("analytic", &Params::default().with("expr", "lune")).unwrap();
        let g = boundary_mesh(&l, 1e-3, 1024).unwrap();
        // inside the lune, outside the removed disk
        assert!(g.contains(z(0.0, 0.0)));
        assert!(g.contains(z(-1.2, 0.3)));
        assert!(!g.contains(z(0.0, 1.2)));
        let d = dist_to_boundary(&g, z(0.0, 0.0)).unwrap();
        // exact: min(pi/2, pi/3 - pi/6)
        assert!((d - PI / 6.0).abs() < 1e-2, "{d}");
    }

    #[test]
    fn arclength_examples() {
        let one = z(1.0, 0.0);
        assert!((radial_arclength(&identity(), z(0.0, 1.0), 0.0, 0.9).unwrap() - 0.9).abs() < 1e-12);
        assert!((radial_arclength(&affine(0.5), one, 0.0, 0.8).unwrap() - 1.2).abs() < 1e-12);
        assert_eq!(radial_arclength(&identity(), one, 0.4, 0.4).unwrap(), 0.0);
        assert!(radial_arclength(&identity(), one, 0.5, 0.4).is_err());
        // cardioid along -1: |h'(-t)| = 1 - t
        let c = catalog_get("analytic", &Params::default().with("expr", "cardioid")).unwrap();
        let v = radial_arclength(&c, -one, 0.0, 0.99).unwrap();
        assert!((v - (0.99 - 0.99 * 0.99 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn koebe_arclength_matches_closed_form() {
        let k = catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap();
        let r: f64 = 1.0 - 2f64.powi(-12);
        let v = radial_arclength(&k, z(1.0, 0.0), 0.0, r).unwrap();
        let want = r / (1.0 - r).powi(2);
        assert!((v - want).abs() < 1e-9 * want);
    }

    #[test]
    fn box_diameters() {
        let o = z(0.0, 0.0);
        let eb = relative_box_clip(o);
        let d = diam_image_of_box(&identity(), o, 64, eb).unwrap();
        assert!((d - 2.0).abs() <= 2.0 * eb, "{d}");
        let d = diam_image_of_box(&affine(0.5), o, 64, eb).unwrap();
        assert!((d - 3.0).abs() <= 3.0 * eb, "{d}");
        // far corners of the annular sector 0.9 <= |zeta| <= 1 - 0.1/256, |arg| <= 0.1 pi
        let w = z(0.9, 0.0);
        let d = diam_image_of_box(&identity(), w, 256, relative_box_clip(w)).unwrap();
        let want = 2.0 * (1.0 - 0.1 / BOX_CLIP) * (0.1 * PI).sin();
        assert!((d - want).abs() < 1e-12, "{d} vs {want}");
        // deeper cutoffs only add points
        let deeper = diam_image_of_box(&identity(), w, 256, 1e-6).unwrap();
        assert!(deeper >= d);
        assert!(diam_image_of_box(&identity(), w, 8, 1e-3).is_err());
        assert!(diam_image_of_box(&identity(), w, 16, 0.0).is_err());
    }

    #[test]
    fn arc_diameters() {
        let eps = 1e-3;
        let d = diam_image_of_arc(&identity(), z(0.5, 0.0), eps, 257).unwrap();
        assert!((d - 2.0 * (0.5f64).sin() * (1.0 - eps)).abs() < 1e-12, "{d}");
        let small = diam_image_of_arc(&identity(), z(0.0, 0.999), eps, 257).unwrap();
        assert!(small < 3e-3);
        let da = diam_image_of_arc(&affine(0.5), z(0.5, 0.0), eps, 257).unwrap();
        assert!(0.5 * d <= da && da <= 1.5 * d);
    }

    #[test]
    fn diameter_agrees_with_brute_force() {
        let pts: Vec<Complex64> = (0..300)
            .map(|k| {
                let t = k as f64 * 0.731;
                z(t.sin() * (1.0 + 0.3 * (3.0 * t).cos()), 0.6 * (2.1 * t).cos())
            })
            .collect();
        assert!((diameter(&pts) - diameter_brute(&pts)).abs() < 1e-15);
        let hull = convex_hull(&pts);
        assert!((calipers(&hull) - diameter_brute(&pts)).abs() < 1e-15);
        let line: Vec<Complex64> = (0..50).map(|k| z(0.1 * k as f64, 0.3 * k as f64)).collect();
        assert!((diameter(&line) - diameter_brute(&line)).abs() < 1e-14);
        assert_eq!(diameter(&[]), 0.0);
        assert_eq!(diameter(&[z(1.0, 1.0)]), 0.0);
        assert_eq!(diameter(&[z(0.0, 0.0), z(3.0, 4.0)]), 5.0);
    }

    #[test]
    fn areas() {
        let a = region_area(&identity(), Region::Disk { radius: 0.5 }, 64).unwrap();
        assert!((a - PI / 4.0).abs() < 1e-4);
        let a = region_area(&affine(0.5), Region::Disk { radius: 0.5 }, 64).unwrap();
        assert!((a - 0.75 * PI / 4.0).abs() < 1e-4);
        assert_eq!(region_area(&identity(), Region::Empty, 64).unwrap(), 0.0);
        // triangle with legs 1 - r
        let a = region_area(&identity(), Region::Corner { r: 0.5, theta: 1.0 }, 64).unwrap();
        assert!((a - 0.125).abs() < 1e-12);
    }

    #[test]
    fn mesh_csv_header() {
        let g = boundary_mesh(&identity(), 1e-3, 512).unwrap();
        let csv = g.to_csv();
        assert!(csv.starts_with("theta,re,im\n"));
        assert_eq!(csv.lines().count(), g.len() + 1);
    }
}
