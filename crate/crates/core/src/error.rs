use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("pattern must be nonempty")]
    EmptyPattern,

    #[error("word entries must be positive integers, got {0}")]
    NonPositiveEntry(u64),

    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("maximum weight must be at least 1")]
    ZeroTruncation,

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },

    #[error("exponent ({a}, {b}, {c}) lies outside the truncation cap {cap}")]
    OutOfCap { a: u32, b: u32, c: u32, cap: u32 },

    #[error(
        "quasi-inverse needs every term to have positive y-degree; found term x^{a} y^{b} z^{c}"
    )]
    NotQuasiInvertible { a: u32, b: u32, c: u32 },

    #[error("x -> x*y^{shift} sends x^{a} y^{b} to a negative y-exponent")]
    NegativeExponent { a: u32, b: u32, shift: i32 },

    #[error("pattern length {got} does not match pre-cluster width {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("pattern length {0} exceeds the supported maximum of 32")]
    PatternTooLong(usize),

    #[error("index i = {i} outside 1..={max} for pattern length {k}")]
    IndexOutOfRange { k: usize, i: usize, max: usize },

    #[error("size-class uniformity fails for k = {k}, i = {i}: subset {{{subset}}} has multiplicity {found}, class expects {expected}")]
    NonUniform {
        k: usize,
        i: usize,
        subset: String,
        found: i64,
        expected: i64,
    },

    #[error("negative multiplicity {found} for subset {{{subset}}} at k = {k}, i = {i}")]
    NegativeMultiplicity {
        k: usize,
        i: usize,
        subset: String,
        found: i64,
    },

    #[error("coefficient combination for k = {k}, i = {i} involves lambda_{j} with j > i")]
    NotTriangular { k: usize, i: usize, j: usize },

    #[error("inconsistent minimal-cluster data: {0}")]
    InconsistentOracle(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse series: {0}")]
    ParseSeries(String),
}
