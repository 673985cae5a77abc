use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed braid word {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorIndex { index: i64, strands: usize },

    #[error("pure braid indices ({i}, {j}) invalid for {strands} strands")]
    PureIndex { i: usize, j: usize, strands: usize },

    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("operation requires {expected} strands, word has {found}")]
    WrongStrands { expected: usize, found: usize },

    #[error("modulus {0} must be at least 2")]
    Modulus(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("enumeration exceeded the order guard of {guard} elements")]
    OrderGuard { guard: usize },

    #[error("word {word:?} does not lie in the subgroup")]
    NotInSubgroup { word: String },

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("words do not form a basis: determinant {determinant}")]
    NotABasis { determinant: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no nonzero invariant skew form for {strands} strands")]
    NoInvariantForm { strands: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
