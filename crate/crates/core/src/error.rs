use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("parameter t = {t} outside [{lo}, {hi}]")]
    Range { t: f64, lo: f64, hi: f64 },

    #[error("trace mismatch: {lhs} vs {rhs}")]
    TraceMismatch { lhs: f64, rhs: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),

    #[error("root finding did not converge: {0}")]
    Convergence(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("block structure identity failed: {0}")]
    Structure(String),
}

impl Error {
    /// True for errors caused by the caller's data rather than by the algorithm.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Dimension(_)
                | Error::Range { .. }
                | Error::TraceMismatch { .. }
                | Error::Domain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
