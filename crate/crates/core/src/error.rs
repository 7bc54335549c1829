use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its domain of validity.
    #[error("{field}: {message}")]
    Domain {
        field: &'static str,
        message: String,
    },

    #[error("array shape mismatch: {0}")]
    Shape(String),

    #[error("positivity lost: {0}")]
    Positivity(String),

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            field,
            message: message.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Positivity(_) | Error::Instability(_) | Error::NonConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
