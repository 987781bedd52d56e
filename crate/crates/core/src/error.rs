use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli symbol {symbol:?} at position {position}")]
    PauliParse { position: usize, symbol: char },

    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("gate {0} is not supported here")]
    Unsupported(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unsupported construct `{construct}`")]
    UnsupportedConstruct { line: usize, construct: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{0}")]
    Input(String),

    #[error("write failed: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
