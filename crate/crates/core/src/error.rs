use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("self-pair ({0}, {0}) is not a valid quadratic key")]
    SelfPair(usize),

    #[error("variable {index} out of range for a model with {num_vars} variables")]
    VarOutOfRange { index: usize, num_vars: usize },

    #[error("non-finite coefficient {0}")]
    NonFinite(f64),

    #[error("term of degree {0} cannot be lowered to a quadratic model")]
    UnsupportedDegree(usize),

    #[error("input magnitude {magnitude} exceeds the auxiliary upper bound z_hi = {z_hi}")]
    Infeasible { magnitude: f64, z_hi: f64 },

    #[error("threshold {threshold} is not on the encoding grid boundary: {reason}")]
    ThresholdOffGrid { threshold: f64, reason: String },

    #[error("model has {num_vars} variables, exhaustive search is capped at {cap}")]
    TooLarge { num_vars: usize, cap: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(v))
    }
}
