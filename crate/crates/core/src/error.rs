use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates a documented precondition (normalisation, trace, zero mean).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Matrix shapes or basis layouts do not match.
    #[error("structural mismatch: {0}")]
    Structure(String),

    /// A covariance matrix does not describe a physical state.
    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),

    #[error(
        "Fock cutoff n_max = {requested} too small for squeezing r = {r}; need n_max >= {required}"
    )]
    Truncation {
        r: f64,
        requested: usize,
        required: usize,
    },

    /// Step-halving convergence check of the integrator failed.
    #[error("accuracy check failed: {0}")]
    Accuracy(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("unknown material preset `{0}`")]
    UnknownPreset(String),

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Accuracy(_) => 3,
            Error::Io { .. } | Error::Csv { .. } => 1,
            _ => 2,
        }
    }
}
