use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    /// A configured enumeration or path budget would be exceeded.
    #[error("resource cap exceeded: {what} requires {required}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// Every restart of an iterative solver hit its iteration limit.
    #[error("no restart converged after {iterations} iterations (best value {best})")]
    NonConvergence { iterations: usize, best: f64 },

    /// No architecture with at most `r_max` gates reached the fidelity target.
    #[error("no circuit with at most {} gates reached the fidelity target (best per gate count: {best_fidelity_per_r:?})", best_fidelity_per_r.len())]
    SynthesisNotFound { best_fidelity_per_r: Vec<f64> },

    #[error("measure evaluation failed at step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
