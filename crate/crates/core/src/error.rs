use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("evaluation error at t = {t}: {message}")]
    Eval { t: f64, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("quadrature did not converge: estimated relative error {estimate:e} exceeds target {target:e}")]
    Convergence { estimate: f64, target: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("root solver failure: {0}")]
    Solver(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn eval(t: f64, msg: impl Into<String>) -> Self {
        Error::Eval {
            t,
            message: msg.into(),
        }
    }

    /// True for failures of the numerical machinery itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Eval { .. } | Error::Solver(_)
        )
    }
}
