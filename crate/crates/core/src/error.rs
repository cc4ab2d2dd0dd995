use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A contraction certificate (δ, φ, Zamfirescu constants, ...) is out of range.
    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("inner solver did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("degenerate comparison: reference sequence vanishes at index {index}")]
    DegenerateComparison { index: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid_point(msg: impl Into<String>) -> Self {
        Error::InvalidPoint(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn certificate(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }
}

/// Rejects contraction factors outside `[0, 1)`.
pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if (0.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::certificate(format!(
            "contraction factor must lie in [0, 1), got {delta}"
        )))
    }
}
