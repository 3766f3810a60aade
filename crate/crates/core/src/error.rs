use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("logarithmic derivative of a zero base polynomial")]
    ZeroBase,
    #[error("\u{398}\u{2032} vanishes")]
    ConstantTheta,
    #[error("operator is not of the form -D^2 + V: {0}")]
    NotSchrodinger(String),
    #[error("seed is not an eigenfunction; (L psi)/psi = {residual}")]
    NotEigenfunction { residual: String },
    #[error("darboux step {index}: {source}")]
    ChainStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("size or action-side mismatch: {0}")]
    Mismatch(String),
    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("expansion degree {degree} exceeds the configured limit {limit}")]
    DegreeLimit { degree: usize, limit: usize },
    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },
}
