use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error(
        "quadrature did not converge after {panels} panels: best estimate {re:e}{im:+e}i, error estimate {error:e}"
    )]
    Convergence {
        re: f64,
        im: f64,
        error: f64,
        panels: usize,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("truncation budget exceeded ({what}); need dimension of at least {suggested}")]
    Truncation { what: String, suggested: usize },

    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    #[error("inversion failed: {0}")]
    Inversion(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
