use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field size q = {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u8),

    #[error("field spec mismatch: stored {stored}, expected {expected}")]
    FieldSpecMismatch { stored: String, expected: String },

    #[error("symbol {symbol} out of range for GF({q})")]
    SymbolOutOfRange { symbol: u8, q: u8 },

    #[error("inversion of zero")]
    ZeroInverse,

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("code length {0} exceeds the supported maximum of {1}")]
    LengthTooLarge(usize, usize),

    #[error("ragged matrix: row {row} has length {got}, expected {expected}")]
    RaggedMatrix { row: usize, got: usize, expected: usize },

    #[error("codes live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(String, String),

    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u8, u8),

    #[error("constraint vector is not contained in the code")]
    NotInCode,

    #[error("doubly-even test is defined over GF(2) only, got GF({0})")]
    DoublyEvenNonBinary(u8),

    #[error("unknown type name {0:?} (expected e.g. 2eI, 2eII, qE:q=3, qH:q=4)")]
    UnknownType(String),

    #[error("type {name} is incompatible with length {len}: {reason}")]
    IncompatibleLength { name: String, len: usize, reason: String },

    #[error("genus index m = {m} out of range 0..={n}")]
    GenusOutOfRange { m: usize, n: usize },

    #[error("neighbor depth k = {k} out of range 1..={n}")]
    NeighborDepthOutOfRange { k: usize, n: usize },

    #[error("seed code is not a member of the requested family")]
    SeedNotInFamily,

    #[error("no seed code constructible for type {name} at length {len}")]
    SeedNotFound { name: String, len: usize },

    #[error("enumeration budget exceeded: {needed} needed, {budget} allowed")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("class database is not complete")]
    IncompleteDatabase,

    #[error("vector dimension {0} does not match class count {1}")]
    DimensionMismatch(usize, usize),

    #[error("operators are defined on different bases ({0} vs {1} classes)")]
    BasisMismatch(usize, usize),

    #[error("eigenspace dimensions sum to {found}, expected {expected} classes")]
    SpectralDefect { found: usize, expected: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
