use thiserror::Error;

/// Errors raised by the emulator, problem generators, and file I/O.
#[derive(Debug, Error)]
pub enum QpeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("memory cap exceeded: need {needed} bytes, cap is {cap} bytes")]
    MemoryCap { needed: u128, cap: u128 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("HDF5 error: {0}")]
    Hdf5(#[from] hdf5::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = QpeError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> QpeError {
    QpeError::InvalidArgument(msg.into())
}
