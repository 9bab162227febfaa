use thiserror::Error;

/// Errors raised by evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("range error in {op}: {detail}")]
    Range { op: &'static str, detail: String },

    #[error("unsupported in {op}: {detail}")]
    Unsupported { op: &'static str, detail: String },

    #[error("quadrature did not converge at epsilon = {epsilon:e} (estimate {err_estimate:e})")]
    NonConvergence { epsilon: f64, err_estimate: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}

pub(crate) fn require_positive(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(
            op,
            format!("{name} must be positive and finite, got {v}"),
        ))
    }
}
