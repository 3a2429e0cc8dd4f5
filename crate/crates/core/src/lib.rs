//! Numerical diagnostics for sense-preserving harmonic maps `f = h + conj(g)`
//! of the unit disk: differential distortion, hyperbolic distortion bounds,
//! image geometry, John-disk criteria, pre-Schwarzian boundary tests and
//! Hardy-space means.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod mapcore;

pub use error::{Error, Result};
pub use mapcore::{catalog_get, load_map_spec, AnalyticRep, ClassFlags, Expr, HarmonicMap, Jet3, Params, Series};
pub mod frame;
pub mod report;
pub mod hyperbolic;
pub mod geometry;
mod quad;
pub mod john;
pub mod schwarz;
pub mod hardy;
pub mod cli;
