//! Closed-form example maps.
//!
//! Entry names and parameter keys are part of the command-line contract:
//!
//! | name             | params                               |
//! |------------------|--------------------------------------|
//! | `identity`       |                                      |
//! | `affine`         | `a` (complex, `|a| < 1`)             |
//! | `shear_omega_bz` | `b` (complex, `|b| < 1`)             |
//! | `analytic`       | `expr` in koebe, cardioid, lune, automorphism (+ `a`) |
//! | `harmonic_koebe` |                                      |
//! | `scaled`         | `inner` (name or `{name, params}`), `r` in (0, 1) |

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AnalyticRep, ClassFlags, Expr, HarmonicMap, Series};
use crate::error::{Error, Result};

/// Key-value parameters of a catalog entry. Complex values are written as
/// `[re, im]` or as a bare real number.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, Value>);

impl Params {
    pub fn from_pairs<const N: usize>(pairs: [(&str, f64); N]) -> Self {
        Params(pairs.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn complex(&self, key: &str) -> Result<Option<Complex64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => value_to_complex(v)
                .map(Some)
                .ok_or_else(|| Error::Parse(format!("parameter `{key}` is not a complex number"))),
        }
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| Error::Parse(format!("parameter `{key}` is not a number"))),
        }
    }

    pub fn text(&self, key: &str) -> Result<Option<&str>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(Error::Parse(format!("parameter `{key}` is not a string"))),
        }
    }
}

pub(crate) fn value_to_complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)),
        Value::Array(a) if a.len() == 2 => Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_disk_param(params: &Params, key: &str, default: Option<Complex64>) -> Result<Complex64> {
    let a = params
        .complex(key)?
        .or(default)
        .ok_or_else(|| Error::ParamOutOfRange(format!("missing parameter `{key}`")))?;
    if !(a.norm() < 1.0) {
        return Err(Error::ParamOutOfRange(format!("|{key}| = {} must be < 1", a.norm())));
    }
    Ok(a)
}

fn dilatation_k(modulus: f64) -> f64 {
    (1.0 + modulus) / (1.0 - modulus)
}

/// Look up a catalog entry.
pub fn catalog_get(name: &str, params: &Params) -> Result<HarmonicMap> {
    match name {
        "identity" => HarmonicMap::analytic(
            AnalyticRep::identity(),
            ClassFlags { in_sh: true, in_sh0: true, bounded_image: true, known_k: Some(1.0), ..Default::default() },
            "identity",
        ),
        "affine" => {
            let a = unit_disk_param(params, "a", None)?;
            // f = z + a conj(z), so g(z) = conj(a) z
            let flags = ClassFlags {
                in_sh: true,
                in_sh0: a.norm() == 0.0,
                bounded_image: true,
                known_k: Some(dilatation_k(a.norm())),
                ..Default::default()
            };
            HarmonicMap::new(
                AnalyticRep::identity(),
                AnalyticRep::ClosedForm(Expr::affine(a.conj(), c(0.0, 0.0))),
                flags,
                format!("affine(a={})", fmt_param(a)),
            )
        }
        "shear_omega_bz" => {
            // |b| = 1 is allowed: omega = b z is still sense-preserving
            // inside the disk, but the map is no longer quasiconformal.
            let b = params
                .complex("b")?
                .ok_or_else(|| Error::ParamOutOfRange("missing parameter `b`".into()))?;
            if !(b.norm() <= 1.0) {
                return Err(Error::ParamOutOfRange(format!("|b| = {} must be <= 1", b.norm())));
            }
            let flags = ClassFlags {
                in_sh: true,
                in_sh0: true,
                bounded_image: true,
                known_k: (b.norm() < 1.0).then(|| dilatation_k(b.norm())),
                ..Default::default()
            };
            let g = Series::new(vec![c(0.0, 0.0), c(0.0, 0.0), b * 0.5], 1.0)?;
            HarmonicMap::new(
                AnalyticRep::identity(),
                AnalyticRep::Series(g),
                flags,
                format!("shear_omega_bz(b={})", fmt_param(b)),
            )
        }
        "analytic" => {
            let expr = params
                .text("expr")?
                .ok_or_else(|| Error::ParamOutOfRange("missing parameter `expr`".into()))?;
            analytic_entry(expr, params)
        }
        "harmonic_koebe" => harmonic_koebe(),
        "scaled" => scaled(params),
        "koebe" | "cardioid" | "lune" | "automorphism" => analytic_entry(name, params),
        other => Err(Error::UnknownCatalogEntry(other.to_string())),
    }
}

fn fmt_param(a: Complex64) -> String {
    if a.im == 0.0 {
        format!("{}", a.re)
    } else {
        format!("[{},{}]", a.re, a.im)
    }
}

fn analytic_entry(expr: &str, params: &Params) -> Result<HarmonicMap> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    match expr {
        "koebe" => {
            let k = Expr::product(vec![Expr::Identity, Expr::affine(-one, one).int_pow(-2)]);
            let flags = ClassFlags { in_sh: true, in_sh0: true, known_k: Some(1.0), ..Default::default() };
            Ok(HarmonicMap::analytic(AnalyticRep::ClosedForm(k), flags, "koebe")?
                .with_singular_directions(vec![one]))
        }
        "cardioid" => {
            let h = Series::new(vec![zero, one, c(0.5, 0.0)], 1.0)?;
            let flags = ClassFlags {
                in_sh: true,
                in_sh0: true,
                bounded_image: true,
                known_k: Some(1.0),
                ..Default::default()
            };
            Ok(HarmonicMap::analytic(AnalyticRep::Series(h), flags, "cardioid")?
                .with_singular_directions(vec![-one]))
        }
        "lune" => {
            let flags = ClassFlags {
                in_sh: true,
                in_sh0: true,
                bounded_image: true,
                known_k: Some(1.0),
                john_failing_reference: true,
            };
            Ok(HarmonicMap::analytic(AnalyticRep::ClosedForm(lune_expr()), flags, "lune")?
                .with_singular_directions(vec![one, -one]))
        }
        "automorphism" => {
            let a = unit_disk_param(params, "a", Some(c(0.3, 0.0)))?;
            let phi = Expr::mobius(one, -a, -a.conj(), one);
            let flags = ClassFlags { bounded_image: true, known_k: Some(1.0), ..Default::default() };
            HarmonicMap::analytic(
                AnalyticRep::ClosedForm(phi),
                flags,
                format!("automorphism(a={})", fmt_param(a)),
            )
        }
        other => Err(Error::UnknownCatalogEntry(format!("analytic:{other}"))),
    }
}

/// Crescent between the circles `|w| = pi/2` and `|w - i pi/3| = pi/6`,
/// tangent at `i pi/2`. Built as disk -> half-plane -> strip -> inversion,
/// then normalized so that `f(0) = 0` and `f'(0) = 1`.
fn lune_expr() -> Expr {
    let one = c(1.0, 0.0);
    let half_plane = Expr::mobius(one, one, -one, one);
    let strip = half_plane.log();
    let shifted = Expr::sum(vec![strip, Expr::constant(c(0.0, PI))]);
    let inverted = shifted.recip();
    let scale = PI * PI / 2.0;
    Expr::compose(Expr::affine(c(scale, 0.0), c(0.0, PI / 2.0)), inverted)
}

fn harmonic_koebe() -> Result<HarmonicMap> {
    let one = c(1.0, 0.0);
    let cube = Expr::affine(-one, one).int_pow(-3);
    let h_num = Series::new(vec![c(0.0, 0.0), one, c(-0.5, 0.0), c(1.0 / 6.0, 0.0)], 1.0)?;
    let g_num = Series::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(1.0 / 6.0, 0.0)], 1.0)?;
    let h = Expr::product(vec![series_expr(&h_num), cube.clone()]);
    let g = Expr::product(vec![series_expr(&g_num), cube]);
    let flags = ClassFlags { in_sh: true, in_sh0: true, ..Default::default() };
    Ok(HarmonicMap::new(AnalyticRep::ClosedForm(h), AnalyticRep::ClosedForm(g), flags, "harmonic_koebe")?
        .with_singular_directions(vec![one]))
}

/// Polynomial as an expression tree (sum of scaled powers).
fn series_expr(s: &Series) -> Expr {
    let terms = s
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(n, a)| match n {
            0 => Expr::constant(*a),
            _ => Expr::Identity.int_pow(n as i32).scale(*a),
        })
        .collect();
    Expr::sum(terms)
}

fn scaled(params: &Params) -> Result<HarmonicMap> {
    let r = params
        .real("r")?
        .ok_or_else(|| Error::ParamOutOfRange("missing parameter `r`".into()))?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::ParamOutOfRange(format!("r = {r} not in (0, 1)")));
    }
    let inner = match params.get("inner") {
        Some(Value::String(name)) => catalog_get(name, params)?,
        Some(Value::Object(obj)) => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("`inner` needs a `name`".into()))?;
            let inner_params = match obj.get("params") {
                Some(p) => serde_json::from_value(p.clone())?,
                None => Params::default(),
            };
            catalog_get(name, &inner_params)?
        }
        _ => return Err(Error::ParamOutOfRange("missing parameter `inner`".into())),
    };
    let h = scale_rep(&inner.h, r);
    let g = scale_rep(&inner.g, r);
    let flags = ClassFlags {
        in_sh: inner.flags.in_sh,
        in_sh0: inner.flags.in_sh0,
        bounded_image: true,
        known_k: inner.flags.known_k,
        john_failing_reference: false,
    };
    HarmonicMap::new(h, g, flags, format!("scaled({}, r={r})", inner.label))
}

/// `z -> f(r z) / r`
fn scale_rep(rep: &AnalyticRep, r: f64) -> AnalyticRep {
    match rep {
        AnalyticRep::Series(s) => {
            let coeffs = s.coeffs.iter().enumerate().map(|(n, a)| a * r.powi(n as i32 - 1)).collect();
            AnalyticRep::Series(Series { coeffs, radius: (s.radius / r).min(1.0) })
        }
        AnalyticRep::ClosedForm(e) => AnalyticRep::ClosedForm(
            Expr::compose(e.clone(), Expr::affine(c(r, 0.0), c(0.0, 0.0))).scale(c(1.0 / r, 0.0)),
        ),
    }
}

/// The six bounded catalog maps used as positive and negative controls.
pub fn reference_set() -> Vec<HarmonicMap> {
    let entries: [(&str, Params); 6] = [
        ("identity", Params::default()),
        ("affine", Params::from_pairs([("a", 0.5)])),
        ("shear_omega_bz", Params::from_pairs([("b", 0.5)])),
        ("analytic", Params::default().with("expr", "cardioid")),
        ("analytic", Params::default().with("expr", "automorphism").with("a", 0.3)),
        ("analytic", Params::default().with("expr", "lune")),
    ];
    entries
        .iter()
        .map(|(name, p)| catalog_get(name, p).expect("reference catalog entries are valid"))
        .collect()
}

/// Every catalog entry with representative parameters.
pub fn all_entries() -> Vec<HarmonicMap> {
    let mut maps = reference_set();
    maps.push(catalog_get("analytic", &Params::default().with("expr", "koebe")).unwrap());
    maps.push(catalog_get("harmonic_koebe", &Params::default()).unwrap());
    maps.push(
        catalog_get("scaled", &Params::default().with("inner", "harmonic_koebe").with("r", 0.9)).unwrap(),
    );
    maps
}
