//! Crate-wide error type with stable machine-readable codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate item id `{0}`")]
    DuplicateItem(String),
    #[error("invalid cost: {0}")]
    InvalidCost(String),
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("feature row {0} is all zeros and cannot be cosine-normalized")]
    ZeroVector(usize),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("item {0} is already selected")]
    AlreadySelected(usize),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("invalid feature value: {0}")]
    InvalidFeature(String),
    #[error("format error: {0}")]
    FormatError(String),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("invalid concept weight: {0}")]
    InvalidWeight(String),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid snippet: {0}")]
    InvalidSnippet(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty ground set: {0}")]
    EmptyGroundSet(String),
    #[error("invalid annotation: {0}")]
    InvalidAnnotation(String),
    #[error("benchmark invariant violated: {0}")]
    BenchInvalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short code used in CLI diagnostics (`ERROR <Code>: <message>`).
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateItem(_) => "DuplicateItem",
            Error::InvalidCost(_) => "InvalidCost",
            Error::InvalidSelection(_) => "InvalidSelection",
            Error::ZeroVector(_) => "ZeroVector",
            Error::InvalidParam(_) => "InvalidParam",
            Error::AlreadySelected(_) => "AlreadySelected",
            Error::Unsupported(_) => "Unsupported",
            Error::TooLarge(_) => "TooLarge",
            Error::ParseError(_) => "ParseError",
            Error::InvalidFeature(_) => "InvalidFeature",
            Error::FormatError(_) => "FormatError",
            Error::UnknownItem(_) => "UnknownItem",
            Error::InvalidWeight(_) => "InvalidWeight",
            Error::InvalidProbability(_) => "InvalidProbability",
            Error::InvalidSnippet(_) => "InvalidSnippet",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EmptyGroundSet(_) => "EmptyGroundSet",
            Error::InvalidAnnotation(_) => "InvalidAnnotation",
            Error::BenchInvalid(_) => "BenchInvalid",
            Error::Io(_) => "Io",
        }
    }
}
