//! Shared report records and CSV output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;

/// Complex number serialized as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex(pub [f64; 2]);

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Complex([z.re, z.im])
    }
}

impl From<Complex> for Complex64 {
    fn from(c: Complex) -> Self {
        Complex64::new(c.0[0], c.0[1])
    }
}

/// One sample of a two-sided inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginRecord {
    pub z: Complex,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

impl MarginRecord {
    /// Passes iff both margins are at least `-tol`.
    pub fn new(z: Complex64, lower: f64, upper: f64, tol: f64) -> Self {
        Self { z: z.into(), lower, upper, pass: lower >= -tol && upper >= -tol }
    }
}

/// Margins for a sweep; `pass` is true iff every record passes.
pub fn all_pass(records: &[MarginRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

/// Serialize a float that may be infinite: finite values as numbers,
/// infinities as the strings `"+inf"` / `"-inf"`.
pub mod extended_float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("+inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad float `{other}`"))),
            },
        }
    }
}

/// A labeled `(x, y)` series for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }
}

/// Format a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// CSV text with header `x,<label>`.
pub fn plot_csv(series: &PlotSeries) -> String {
    let mut out = format!("x,{}\n", series.label);
    for &(x, y) in &series.points {
        let _ = writeln!(out, "{},{}", fmt_float(x), fmt_float(y));
    }
    out
}

/// CSV text with an arbitrary header and rows of floats.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_plot_data(series: &PlotSeries, path: &Path) -> Result<()> {
    fs::write(path, plot_csv(series))?;
    Ok(())
}
