//! JSON map specification files.
//!
//! ```json
//! {"kind": "series", "h": [[0,0],[1,0]], "g": [[0,0],[0,0],[0.25,0]]}
//! {"kind": "catalog", "name": "affine", "params": {"a": 0.5}}
//! ```
//!
//! Series documents may claim class membership with `"flags": {"in_sh": true}`;
//! a claim that the coefficients contradict is an invariant violation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalog::{catalog_get, Params};
use super::{AnalyticRep, ClassFlags, HarmonicMap, Series};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimedFlags {
    #[serde(default)]
    pub in_sh: bool,
    #[serde(default)]
    pub in_sh0: bool,
    #[serde(default)]
    pub bounded_image: Option<bool>,
    #[serde(default)]
    pub known_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Series,
    Catalog,
}

/// Parsed form of a map specification document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub kind: SpecKind,
    #[serde(default)]
    pub h: Vec<[f64; 2]>,
    #[serde(default)]
    pub g: Vec<[f64; 2]>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub flags: Option<ClaimedFlags>,
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl MapSpec {
    pub fn into_map(self) -> Result<HarmonicMap> {
        match self.kind {
            SpecKind::Catalog => {
                let name = self
                    .name
                    .ok_or_else(|| Error::Parse("catalog spec needs a `name`".into()))?;
                catalog_get(&name, &self.params)
            }
            SpecKind::Series => {
                if self.h.is_empty() {
                    return Err(Error::Parse("series spec needs `h` coefficients".into()));
                }
                let radius = self.radius.unwrap_or(1.0);
                let h = AnalyticRep::Series(Series::new(to_complex(&self.h), radius)?);
                let g_coeffs = if self.g.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { to_complex(&self.g) };
                let g = AnalyticRep::Series(Series::new(g_coeffs, radius)?);
                let (in_sh, in_sh0) = HarmonicMap::infer_normalization(&h, &g)?;
                let claimed = self.flags.unwrap_or_default();
                let flags = ClassFlags {
                    in_sh: in_sh || claimed.in_sh || claimed.in_sh0,
                    in_sh0: in_sh0 || claimed.in_sh0,
                    // a polynomial on the closed disk has bounded image
                    bounded_image: claimed.bounded_image.unwrap_or(radius >= 1.0),
                    known_k: claimed.known_k,
                    john_failing_reference: false,
                };
                HarmonicMap::new(h, g, flags, self.name.unwrap_or_else(|| "series".into()))
            }
        }
    }
}

/// Parse a JSON map specification.
pub fn load_map_spec(document: &[u8]) -> Result<HarmonicMap> {
    let spec: MapSpec = serde_json::from_slice(document)?;
    spec.into_map()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_identity() {
        let f = load_map_spec(br#"{"kind":"catalog","name":"identity"}"#).unwrap();
        assert_eq!(f.label, "identity");
    }

    #[test]
    fn series_infers_sh0() {
        let f = load_map_spec(br#"{"kind":"series","h":[[0,0],[1,0]],"g":[[0,0],[0,0],[0.25,0]]}"#).unwrap();
        assert!(f.flags.in_sh && f.flags.in_sh0);
        let w = f.eval(Complex64::new(0.5, 0.0)).unwrap();
        assert!((w.re - (0.5 + 0.0625)).abs() < 1e-15);
    }

    #[test]
    fn claimed_class_contradiction() {
        let doc = br#"{"kind":"series","h":[[1,0]],"flags":{"in_sh":true}}"#;
        assert!(matches!(load_map_spec(doc), Err(Error::InvariantViolation(_))));
        // without the claim the same series is accepted but not in S_H
        let f = load_map_spec(br#"{"kind":"series","h":[[1,0]]}"#).unwrap();
        assert!(!f.flags.in_sh);
    }

    #[test]
    fn g_nonzero_at_origin_rejected() {
        let doc = br#"{"kind":"series","h":[[0,0],[1,0]],"g":[[0.1,0]]}"#;
        assert!(matches!(load_map_spec(doc), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(load_map_spec(b"{not json"), Err(Error::Parse(_))));
        assert!(matches!(load_map_spec(br#"{"kind":"other"}"#), Err(Error::Parse(_))));
        assert!(matches!(
            load_map_spec(br#"{"kind":"catalog","name":"bogus"}"#),
            Err(Error::UnknownCatalogEntry(_))
        ));
    }

    #[test]
    fn catalog_params_pass_through() {
        let f = load_map_spec(br#"{"kind":"catalog","name":"affine","params":{"a":[0.0,0.5]}}"#).unwrap();
        assert_eq!(f.flags.known_k, Some(3.0));
    }
}
