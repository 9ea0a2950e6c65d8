use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no convergence after {iterations} iterations (last gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("degenerate node {node}: neighbor centrality sum below 1e-12")]
    DegenerateNode { node: usize },

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("empty selection: quantile {quantile} of {count} samples selects nothing")]
    EmptySelection { quantile: f64, count: usize },

    #[error("invalid histogram range [{lo}, {hi}) with {bins} bins")]
    InvalidRange { lo: f64, hi: f64, bins: usize },

    #[error("histograms have mismatched bin edges")]
    MismatchedEdges,

    #[error("degenerate regressor: all x values are equal")]
    DegenerateX,

    #[error("ensemble summary has no strategic selection")]
    MissingSelection,

    #[error("convergence failure rate too high: {failures} of {count} samples")]
    FailureRateExceeded { failures: usize, count: usize },

    #[error("{}: malformed record at line {line}: {msg}", path.display())]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: invariant violation at line {line} in field `{field}`: {msg}", path.display())]
    InvariantViolation {
        path: PathBuf,
        line: usize,
        field: &'static str,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that stem from numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::DegenerateNode { .. }
                | Error::FailureRateExceeded { .. }
        )
    }
}
