use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("not an F_q-subspace: {0}")]
    NotSubspace(String),
    #[error("kernel is not stable under phi_T")]
    NotStable,
    #[error("kernel meets the characteristic torsion")]
    CharacteristicKernel,
    #[error("torsion splitting degree exceeds cap {cap}")]
    SplittingCap { cap: usize },
    #[error("values are not rational over the requested field")]
    NotRational,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("p-adic precision exhausted: need {needed} digits, have {have}")]
    Precision { needed: i64, have: i64 },
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("supersingular sample j = {0}")]
    Supersingular(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short tag for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "invalid",
            Error::NotIrreducible(_) => "not-irreducible",
            Error::DivisionByZero => "division-by-zero",
            Error::FieldMismatch => "field-mismatch",
            Error::NotSubspace(_) => "not-subspace",
            Error::NotStable => "not-stable",
            Error::CharacteristicKernel => "characteristic-kernel",
            Error::SplittingCap { .. } => "splitting-cap",
            Error::NotRational => "not-rational",
            Error::Degenerate(_) => "degenerate",
            Error::Precision { .. } => "precision",
            Error::InsufficientSamples(_) => "insufficient-samples",
            Error::Supersingular(_) => "supersingular",
            Error::Infeasible(_) => "infeasible",
            Error::Budget(_) => "budget",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
