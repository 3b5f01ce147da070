use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("invalid block split {split} for {n} qubits")]
    InvalidSplit { split: usize, n: usize },
    #[error("cannot parse Pauli literal {0:?}")]
    Parse(String),
    #[error("observable is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("forbidden measurement of {0}: it would erase logical information")]
    Forbidden(String),
    #[error("forced outcome {forced} contradicts determined outcome {determined} for {obs}")]
    InconsistentOutcome { obs: String, forced: i8, determined: i8 },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("model assumption violated: {0}")]
    ModelAssumption(String),
    #[error("size cap exceeded: {attempts} attempted BMs > cap {cap}")]
    CapExceeded { attempts: usize, cap: usize },
    #[error("probability out of range: {0}")]
    Probability(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("physical model: {0}")]
    Physical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
