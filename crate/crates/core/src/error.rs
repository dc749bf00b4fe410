use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The adaptive step size collapsed; the system is too stiff for the
    /// explicit integrator or the tolerances are unreachable.
    #[error("step size underflow at t = {t:e}")]
    Stiffness { t: f64 },

    #[error("velocity class kv = {kv}: {source}")]
    VelocityClass {
        kv: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("flat-top pulse infeasible: area {requested} below minimum achievable {minimum}")]
    Infeasible { requested: f64, minimum: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
