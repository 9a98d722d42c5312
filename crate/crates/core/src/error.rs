use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function returned a non-finite value at an interior sample.
    #[error("non-finite value {value} from {context} at {at}")]
    Evaluation {
        context: String,
        at: f64,
        value: f64,
    },

    /// A quadrature exhausted its refinement budget.
    #[error("{context}: quadrature did not converge (value {value}, error estimate {error_estimate})")]
    NonConvergence {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    /// A hypothesis of a theorem failed its sampled check.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Prefix the context of numerical errors with the caller's description.
    pub fn within(self, outer: &str) -> Self {
        match self {
            Error::Evaluation { context, at, value } => Error::Evaluation {
                context: format!("{outer}: {context}"),
                at,
                value,
            },
            Error::NonConvergence {
                context,
                value,
                error_estimate,
            } => Error::NonConvergence {
                context: format!("{outer}: {context}"),
                value,
                error_estimate,
            },
            other => other,
        }
    }
}
