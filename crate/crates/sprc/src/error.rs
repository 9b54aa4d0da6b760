use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient history: sample {requested} needs {required} buffered samples")]
    InsufficientHistory { requested: usize, required: usize },

    #[error("Riccati iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    DareNotConverged { iterations: usize, residual: f64 },

    #[error("Riccati solution is not stabilising (closed-loop spectral radius {radius:.6})")]
    DareNotStabilizing { radius: f64 },

    #[error("ill-conditioned lifted solve (growth estimate {estimate:.3e})")]
    IllConditioned { estimate: f64 },

    #[error("plant state diverged at sample {0}")]
    Diverged(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
