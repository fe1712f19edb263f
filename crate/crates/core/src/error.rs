use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported Sobol dimension {dim} (direction-number table covers 1..={max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{0}")]
    Partition(String),

    #[error("eigensolver did not converge (best residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
