use thiserror::Error;

/// Errors raised by the verification pipeline.
///
/// Verification *failures* at a given step (contraction failure, radii that
/// never close) are recorded in the run report. They only surface as errors
/// when a single operation is called directly.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty approximation space: {0}")]
    EmptySpace(String),

    #[error("could not certify bound: {0}")]
    BoundFailure(String),

    #[error("matrix not certified invertible: residual norm bound {residual} >= 1")]
    Singularity { residual: f64 },

    #[error("linearized operator is not contractive: kappa upper bound {kappa_hi} (need < 1)")]
    ContractionFailure { kappa_hi: f64 },

    #[error("reference solve failed: {0}")]
    ReferenceSolveFailure(String),

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("invalid state: {0}")]
    State(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
