//! Crate-wide error type.

/// Errors surfaced by field, polynomial, factorization and experiment
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Elements of different fields were combined arithmetically.
    #[error("field mismatch: elements belong to different field contexts")]
    FieldMismatch,
    /// `p` failed the primality test.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// `q = p^k` exceeds the supported word range.
    #[error("field size p^k = {p}^{k} does not fit the supported word range")]
    FieldTooLarge { p: u64, k: u32 },
    /// A supplied extension modulus is not monic irreducible of degree `k`.
    #[error("bad extension modulus: {0}")]
    BadModulus(String),
    /// A field/polynomial/family description string failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// Multiplicative inverse of zero.
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    /// `0^0` requested.
    #[error("0^0 is undefined")]
    ZeroToZero,
    /// Division by the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZero,
    /// `gcd(0, 0)` requested.
    #[error("gcd(0, 0) is undefined")]
    GcdBothZero,
    /// `powmod` with a constant modulus.
    #[error("powmod modulus must be nonconstant")]
    ConstantModulus,
    /// Resultant of a zero polynomial.
    #[error("resultant requires nonzero inputs")]
    ZeroResultantInput,
    /// Discriminant of a constant, or subdiscriminant of degree < 2.
    #[error("degree too small: {0}")]
    DegreeTooSmall(String),
    /// A monic input was required.
    #[error("input polynomial must be monic")]
    NotMonic,
    /// EDF over a field of even size.
    #[error("equal-degree factorization requires odd field size")]
    EvenFieldEdf,
    /// EDF called with k not dividing deg c.
    #[error("EDF degree {k} does not divide deg c = {deg}")]
    BadEdfDegree { k: usize, deg: usize },
    /// An index argument was out of range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// A vector argument had the wrong length.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    /// Invalid family parameters.
    #[error("invalid family: {0}")]
    BadFamily(String),
    /// An enumeration or sieve exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// Rejection sampling exceeded its attempt cap.
    #[error("rejection sampling exceeded {0} attempts")]
    RejectionCapExceeded(u64),
    /// The trial-division sieve does not reach deep enough for the input.
    #[error("sieve too shallow: need degree {need}, have {have}")]
    SieveTooShallow { need: usize, have: usize },
    /// An intermediate integer quantity overflowed its container.
    #[error("integer overflow computing {0}")]
    Overflow(String),
}
