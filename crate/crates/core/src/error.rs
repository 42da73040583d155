//! Error type shared by every module of the crate.

use std::path::PathBuf;

use crate::si::TraceEntry;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid cluster: {0}")]
    InvalidCluster(String),

    #[error("degenerate cluster: {0}")]
    DegenerateCluster(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("kernel is singular at entry ({row}, {col}): zero distance with no regularization")]
    SingularEvaluation { row: usize, col: usize },

    #[error("zero pivot at step {step}")]
    SingularPivot { step: usize },

    #[error("jacobi svd did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("reference matrix has zero Frobenius norm")]
    DivisionByZeroNorm,

    #[error("area weights need endo-vertices, got a {0} set")]
    UnsupportedProvenance(&'static str),

    #[error("candidate matrix is numerically zero, no skeleton selected")]
    EmptySkeleton,

    #[error("pivot block stayed singular after shrinking the skeleton to zero")]
    FactorizationFailure,

    #[error("no convergence: r0 reached its cap of {r0_cap} with error {last_error:.3e}")]
    NoConvergence {
        r0_cap: usize,
        last_error: f64,
        trace: Vec<TraceEntry>,
    },
}
