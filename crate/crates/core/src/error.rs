use thiserror::Error;

use crate::language::CountTable;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("exponent {exponent} times length {len} is not an integer")]
    NonIntegralPower { exponent: String, len: usize },

    #[error("symbol {symbol} is not in the alphabet of size {d}")]
    BadSymbol { symbol: u32, d: usize },

    #[error("invalid language parameters: {0}")]
    InvalidSpec(String),

    #[error("word {0} is not in the language")]
    NotInLanguage(String),

    #[error("parameters outside the supported regime: {0}")]
    UnsupportedRegime(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("words must share a length: {0}")]
    LengthMismatch(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("language is empty at length {0}")]
    EmptyLanguage(usize),

    #[error("budget of {budget} search nodes exceeded")]
    BudgetExceeded {
        budget: u64,
        partial: Box<CountTable>,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Machine-readable error code used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyWord => "EMPTY_WORD",
            Error::BadIndex(_) => "BAD_INDEX",
            Error::NonIntegralPower { .. } => "NON_INTEGRAL_POWER",
            Error::BadSymbol { .. } => "BAD_SYMBOL",
            Error::InvalidSpec(_) => "INVALID_SPEC",
            Error::NotInLanguage(_) => "NOT_IN_LANGUAGE",
            Error::UnsupportedRegime(_) => "UNSUPPORTED_REGIME",
            Error::BadInput(_) => "BAD_INPUT",
            Error::LengthMismatch(_) => "LENGTH_MISMATCH",
            Error::MissingData(_) => "MISSING_DATA",
            Error::EmptyLanguage(_) => "EMPTY_LANGUAGE",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::VerificationFailed(_) => "VERIFICATION_FAILED",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
