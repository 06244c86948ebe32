use thiserror::Error;

/// Rejections of user-supplied parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("continued fraction hits a zero denominator")]
    ZeroDenominator,
    #[error("crossing word is empty")]
    EmptyWord,
    #[error("continued fraction overflows 64-bit arithmetic")]
    Overflow,
    #[error("p = {0} is even: two-component links are not supported")]
    EvenP(i64),
    #[error("p = 1 gives the unknot in S^3, which is not supported")]
    UnitP,
    #[error("p = {0} must be positive")]
    NonPositiveP(i64),
    #[error("gcd({p}, {q}) != 1")]
    NotCoprime { p: i64, q: i64 },
}

/// Internal consistency failures. None of these should be reachable from valid
/// parameters; each one means a construction or algebra invariant broke.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("knot trace does not close up with alternating basepoints")]
    TraceBroken,
    #[error("periodic domain lattice has rank {0}, expected 3")]
    UnexpectedPeriodicDomain(usize),
    #[error("generators lie in different Spin^c sectors")]
    DifferentSectors,
    #[error("signed generating function is not divisible by (1 - T^-1)")]
    NotDivisible,
    #[error("no Alexander shift makes the quotient symmetric")]
    NoSymmetricShift,
    #[error("boundary map does not square to zero ({0})")]
    DSquaredNonzero(String),
    #[error("differential is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("sector {0} has no surviving homology class")]
    EmptyHomology(u32),
    #[error("sector {sector}: Poincare polynomial not divisible by V")]
    NotDivisibleByV { sector: u32 },
    #[error("oracle mismatch against parallelogram enumeration: {0}")]
    MismatchAgainstParallelograms(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
