use std::path::PathBuf;

use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The solver finished without an optimal point.
    #[error("solver stopped with status {status:?} ({context})")]
    Solver { status: LpStatus, context: String },

    #[error("could not sample a feasible EV after {attempts} attempts (EV #{index})")]
    ResampleExhausted { index: usize, attempts: usize },

    /// Bid curve samples decreased with price. The staircase is provably
    /// monotone, so this points at a solver defect.
    #[error("non-monotone samples: P1({c_lo}) = {p_lo} > P1({c_hi}) = {p_hi}")]
    NonMonotone {
        c_lo: f64,
        c_hi: f64,
        p_lo: f64,
        p_hi: f64,
    },

    #[error("sweep did not saturate at the {end} end after {doublings} doublings")]
    NotSaturated { end: &'static str, doublings: usize },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for infeasible LP outcomes, which are physical (e.g. an AC that
    /// cannot hold its comfort band) rather than defects.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Solver {
                status: LpStatus::Infeasible,
                ..
            }
        )
    }
}
