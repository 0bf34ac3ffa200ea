use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bad graph file: {0}")]
    Format(String),

    /// A per-trial structural claim failed while event E held. This is not a
    /// statistic: the run must stop and surface the reproduction coordinates.
    #[error("claim violation under event E ({mode} mode, trial {trial}, master seed {seed}): {detail}")]
    ClaimViolation {
        mode: &'static str,
        trial: u64,
        seed: u64,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
