use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size must be at least 2 and at most 256, got {0}")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} at offset {offset} is outside the alphabet of size {size}")]
    SymbolOutOfRange { symbol: u8, offset: usize, size: usize },

    #[error("window must contain at least one symbol")]
    EmptyWindow,

    #[error("disjoint windows")]
    DisjointWindows,

    #[error("alphabet mismatch: expected size {expected}, got {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("block length mismatch: {0} vs {1}")]
    BlockLengthMismatch(usize, usize),

    #[error("block length {k} exceeds window length {len}")]
    BlockTooLong { k: usize, len: usize },

    #[error("enumeration budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: String, budget: u64 },

    #[error("window of length {len} is too short: {what} requires at least {required}")]
    WindowTooShort { len: usize, required: usize, what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("low-denominator rational rotation number: {0}")]
    LowDenominator(String),

    #[error("adjacency matrix is non-primitive")]
    NonPrimitive,

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("target outside achieved range: {0}")]
    TargetOutOfRange(String),

    #[error("admissibility violation at beta={beta}: offending subword {subword}")]
    AdmissibilityViolation { beta: String, subword: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
