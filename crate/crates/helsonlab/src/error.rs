//! Crate-wide error type.

use num_complex::Complex64;

use crate::schatten::{IndexOrigin, SymbolKind};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("argument must be a positive integer")]
    ZeroArgument,
    #[error("alpha must be >= 1 (got {0})")]
    AlphaBelowOne(f64),
    #[error("Schatten exponent must satisfy q >= 1 (got {0})")]
    ExponentBelowOne(f64),
    #[error("q = 2 is excluded: both branch exponents degenerate and the projection is bounded there")]
    QTwoExcluded,
    #[error("q = {0} is outside the branch {1}")]
    OutOfBranch(f64, &'static str),
    #[error("parameter must be a non-negative real (got {0})")]
    NegativeParameter(f64),
    #[error("expected an {expected:?} symbol, got {found:?}")]
    SymbolKindMismatch { expected: SymbolKind, found: SymbolKind },
    #[error("expected index origin {expected:?}, got {found:?}")]
    OriginMismatch { expected: IndexOrigin, found: IndexOrigin },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("matrix dimension {requested} exceeds the configured cap {cap} (override with {env})", env = crate::schatten::SIZE_CAP_ENV)]
    SizeCapExceeded { requested: usize, cap: usize },
    #[error("weight fails the unit-sum condition at k = {k}: deviation {deviation:e}")]
    WeightInvalid { k: u64, deviation: f64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("restriction depth {depth} requires p^{exp} <= {available} for p = {p}", exp = depth - 1)]
    DepthTooLarge { p: u64, depth: usize, available: usize },
    #[error("local block for prime {prime} must have top-left entry 1 (got {value})")]
    BlockNotUnital { prime: u64, value: Complex64 },
    #[error("local blocks must be square with strictly ascending primes")]
    MalformedBlockFamily,
    #[error("weight triple must be non-negative with entries summing to 1 (got sum {0})")]
    InvalidTriple(f64),
    #[error("branch equation admits {found} sign changes on (0, 1), expected exactly one")]
    RootNotUnique { found: usize },
    #[error("bisection stalled at q = {q}: residual {residual:e} above tolerance")]
    SolverStalled { q: f64, residual: f64 },
    #[error("index arithmetic overflow: {0}")]
    IndexOverflow(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate entry at ({m}, {n})")]
    DuplicateEntry { m: u64, n: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
