use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coordinate index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("division by a jet that vanishes at the base point")]
    DivisionByZero,
    #[error("jet order exhausted")]
    OrderExhausted,
    #[error("jets live at different base points")]
    BasePointMismatch,
    #[error("value at the base point must be 1, got {0}")]
    NotNormalized(String),
    #[error("matrix m is not skew-symmetric")]
    NotSkew,
    #[error("wrong tensor type: {0}")]
    WrongTensorType(String),
    #[error("wrong conformal weight: expected {expected}, got {got}")]
    WrongWeight { expected: String, got: String },
    #[error("metric is singular at the base point")]
    SingularMetric,
    #[error("connection difference tensor is not symmetric in its lower indices")]
    AsymmetricConnection,
    #[error("input is not a conformal Killing field")]
    NotConformalKilling,
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
