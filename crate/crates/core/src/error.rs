use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("seminorm indices out of order: s = {s} must be >= r = {r}")]
    SeminormOrder { r: f64, s: f64 },

    #[error("invalid Levy measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("region carries infinite mass: {0}")]
    InfiniteMass(String),

    #[error("region carries zero mass")]
    EmptyRegion,

    #[error("region is not bounded away from the origin")]
    NotBoundedBelow,

    #[error("matrix error: {0}")]
    Matrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
