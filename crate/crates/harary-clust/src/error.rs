use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges after preprocessing")]
    EmptyGraph,

    #[error("graph is not connected")]
    Disconnected,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("vertex {0} has no label")]
    MissingLabel(u32),

    #[error("metric undefined on a graph with no edges")]
    ZeroEdges,

    #[error("graph too large for {op}: {n} vertices exceeds the cap of {cap}")]
    SizeCap { op: &'static str, n: usize, cap: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("Jacobi sweep did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("signed graph is unbalanced")]
    Unbalanced,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
