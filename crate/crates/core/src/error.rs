use std::path::PathBuf;

/// Errors produced by the solver library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("non-triangle face at line {line}")]
    NonTriangleFace { line: usize },

    #[error("vertex index {index} out of range at line {line} ({count} vertices)")]
    IndexOutOfRange {
        line: usize,
        index: i64,
        count: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("point ({x}, {y}, {z}) lies outside the spectral grid")]
    OutsideGrid { x: f64, y: f64, z: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("cache header mismatch in {path}")]
    CacheMismatch { path: PathBuf },

    #[error("corrupt cache file {path}: {msg}")]
    CacheCorrupt { path: PathBuf, msg: String },

    #[error("gmres breakdown at iteration {iteration} (residual history {history:?})")]
    Breakdown { iteration: usize, history: Vec<f64> },

    #[error("series did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
