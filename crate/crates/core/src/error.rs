use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} is outside 1..=4")]
    DegreeTooLarge(u32),
    #[error("field order {0} exceeds 2^20")]
    OrderTooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no irreducible polynomial of degree {k} over GF({p}) found")]
    NoIrreducibleFound { p: u32, k: u32 },
    #[error("operation needs extension degree {expected}, field has degree {found}")]
    WrongDegree { expected: u32, found: u32 },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objects live over different fields (q = {left} vs q = {right})")]
    MismatchedField { left: u32, right: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),

    #[error("{constraints} constraints is not below {monomials} monomials")]
    InfeasibleCount { constraints: u64, monomials: u64 },
    #[error("constraint point sets are not disjoint")]
    SetsNotDisjoint,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("monomial exponent {exponent} reaches the field order {q}")]
    DegreeCapViolated { exponent: u32, q: u32 },

    #[error("odd field order required, got q = {0}")]
    EvenFieldUnsupported(u32),
    #[error("alpha = {0} is out of range")]
    AlphaOutOfRange(String),
    #[error("no acceptable sample after {attempts} attempts")]
    RetryExhausted { attempts: usize },
    #[error(
        "N_q(3,m) = {monomials} does not exceed the weighted size bound {bound:.3}; no contradiction available"
    )]
    CountingNotInParadoxRegime { monomials: u64, bound: f64 },

    #[error("line family has {lines} lines, below the required {required:.2}")]
    TooFewLines { lines: usize, required: f64 },
    #[error("set is not a Nikodym set ({failing} failing points)")]
    NotNikodym { failing: usize },
    #[error("complement line assignment is not injective at point {0}")]
    AssignmentNotInjective(usize),
    #[error("generator cannot reach the requested size: {0}")]
    GeneratorInfeasible(String),

    #[error("matrix is not Hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("field order {0} is not a square")]
    NonSquareField(u32),
    #[error("line meets the variety in {0} points, outside the admissible classes")]
    InternalClassification(usize),

    #[error("field too large for the requested computation: {0}")]
    FieldTooLarge(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("{planes} planes give k = {k:.3}, need k > 1")]
    TooFewPlanes { planes: usize, k: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
