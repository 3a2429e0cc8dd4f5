//! Adaptive 7/15-point Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const MAX_DEPTH: u32 = 40;
const MAX_INTERVALS: usize = 20_000;

/// Kronrod estimate and `|K - G|` on `[a, b]`.
fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

/// Integrate `f` over `[a, b]`, starting from the given interior breakpoints,
/// until the summed error estimate is below `rel_tol * |integral|`.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, breaks: &[f64], rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let mut pieces = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (value, err) = gk15(&mut f, w[0], w[1])?;
        pieces.push(Piece { a: w[0], b: w[1], value, err, depth: 0 });
    }
    loop {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { a, b });
        }
        if err <= rel_tol * total.abs() || err <= f64::MIN_POSITIVE {
            return Ok(total);
        }
        let (i, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one piece");
        let p = pieces.swap_remove(i);
        if p.depth >= MAX_DEPTH || pieces.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure { a: p.a, b: p.b });
        }
        let m = 0.5 * (p.a + p.b);
        for (lo, hi) in [(p.a, m), (m, p.b)] {
            let (value, err) = gk15(&mut f, lo, hi)?;
            pieces.push(Piece { a: lo, b: hi, value, err, depth: p.depth + 1 });
        }
    }
}

/// Breakpoints `1 - 2^{-k}` inside `(a, b)`, which keep pieces short near `t = 1`.
pub fn dyadic_breaks(a: f64, b: f64) -> Vec<f64> {
    (1..60).map(|k| 1.0 - 2f64.powi(-k)).filter(|&x| x > a && x < b).collect()
}
