use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exponent p = {0} is below 1")]
    InvalidExponent(f64),
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("invalid weight at index {index}: {reason}")]
    InvalidWeight { index: usize, reason: &'static str },
    #[error("the zero vector has no extremal selector")]
    ZeroVector,
    #[error("strip point {0} is outside 0 <= Re z <= 1")]
    OutsideStrip(num_complex::Complex64),
    #[error("finite-difference step {0} outside [1e-6, 1e-2]")]
    InvalidStep(f64),
    #[error("unsupported derivative order {0}")]
    InvalidOrder(u32),
    #[error("finite-difference imaginary residue {residue:e} exceeds {bound:e}")]
    ImaginaryResidue { residue: f64, bound: f64 },
    #[error("Orlicz function is not convex on (0, {cutoff}]: M''({at}) = {value}")]
    NotConvex { cutoff: f64, at: f64, value: f64 },
    #[error("invalid Orlicz parameter: {0}")]
    InvalidOrlicz(String),
    #[error("unknown differential `{0}`")]
    UnknownDifferential(String),
    #[error("slot `{slot}` must vanish for subspace {tag}")]
    ForbiddenSlot { slot: &'static str, tag: String },
    #[error("element shape mismatch: map `{map}` expects a {expected}")]
    ShapeMismatch { map: char, expected: &'static str },
    #[error("block basis: {0}")]
    InvalidBlocks(String),
    #[error("need at least {needed} blocks, have {available}")]
    TooFewBlocks { needed: usize, available: usize },
    #[error("block Gram form is singular at truncation {0}")]
    SingularBlockForm(usize),
    #[error("input must be strictly positive on its support")]
    NonPositive,
    #[error("inverse differential is singular at coordinate {0} (log w = 0)")]
    SingularInverse(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
