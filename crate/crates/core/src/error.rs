use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point outside the domain of evaluation: {0}")]
    Domain(String),
    #[error("singular node in expression: {0}")]
    SingularNode(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("critical point of h at z = {0}")]
    CriticalPoint(String),
    #[error("map is not sense-preserving at z = {0}")]
    NotSensePreserving(String),
    #[error("map is not a self-map of the disk at z = {0}")]
    NotSelfMap(String),
    #[error("map is not flagged as having a bounded image")]
    UnboundedImage,
    #[error("boundary refinement exceeded {0} vertices")]
    RefinementOverflow(usize),
    #[error("point {0} lies outside the meshed domain")]
    OutsideDomain(String),
    #[error("quadrature failed to reach tolerance on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("tail integral diverges for a map with unbounded image")]
    DivergentTail,
    #[error("degenerate dilatation |omega| >= 1 at z = {0}")]
    DegenerateDilatation(String),
    #[error("series truncation too coarse: tail bound {0:e}")]
    TruncationTooCoarse(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn fmt_z(z: num_complex::Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}
