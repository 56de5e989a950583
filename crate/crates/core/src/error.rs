use core::fmt;

use crate::semilinear::Feasibility;

/// Which Eisenstein criterion a polynomial failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinDefect {
    Empty,
    NotMonic,
    ConstantPolynomial,
    /// Coefficient of `u^i` (for `i < e`) is not divisible by `p`.
    CoefficientNotDivisible(usize),
    /// `p^2` divides the constant term.
    ConstantDivisibleByP2,
    /// Coefficient arithmetic left the supported integer range.
    Overflow,
}

impl fmt::Display for EisensteinDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "no coefficients"),
            Self::NotMonic => write!(f, "leading coefficient is not 1"),
            Self::ConstantPolynomial => write!(f, "degree 0"),
            Self::CoefficientNotDivisible(i) => write!(f, "p does not divide a_{i}"),
            Self::ConstantDivisibleByP2 => write!(f, "p^2 divides a_0"),
            Self::Overflow => write!(f, "coefficients exceed the supported range"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    UnsupportedDegree(usize),
    /// `p^n` or `p^d` does not fit the machine-word arithmetic.
    ScaleExceeded,
    InvalidModulus(&'static str),
    ZeroInput,
    NotAUnit,
    NoRoot,
    InsufficientPrecision { needed: i64, available: i64 },
    Infeasible(Feasibility),
    PreconditionViolated(&'static str),
    RingMismatch,
    NotEisenstein(EisensteinDefect),
    NotAFactor,
    ConditionsFailed { cond1: bool, cond2: bool },
    InvalidParameters(&'static str),
    F1DivisibleByP,
    NegativeValuationEntry { row: usize, col: usize },
    IdentityFails { row: usize },
    DimensionMismatch,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::UnsupportedDegree(d) => write!(f, "extension degree {d} unsupported (1..=4)"),
            Error::ScaleExceeded => write!(f, "ring exceeds machine-word scale"),
            Error::InvalidModulus(why) => write!(f, "invalid modulus: {why}"),
            Error::ZeroInput => write!(f, "ZeroInput: input is zero"),
            Error::NotAUnit => write!(f, "NotAUnit: leading coefficient is not a unit"),
            Error::NoRoot => write!(f, "NoRoot: element is not a (p-1)-st power"),
            Error::InsufficientPrecision { needed, available } => write!(
                f,
                "InsufficientPrecision: need precision {needed}, have {available}"
            ),
            Error::Infeasible(reason) => write!(f, "Infeasible: {reason}"),
            Error::PreconditionViolated(why) => write!(f, "PreconditionViolated: {why}"),
            Error::RingMismatch => write!(f, "operands live in different coefficient rings"),
            Error::NotEisenstein(d) => write!(f, "NotEisenstein: {d}"),
            Error::NotAFactor => write!(f, "NotAFactor: multiplier is not a factor of E"),
            Error::ConditionsFailed { cond1, cond2 } => {
                write!(f, "ConditionsFailed: cond1={cond1}, cond2={cond2}")
            }
            Error::InvalidParameters(why) => write!(f, "invalid parameters: {why}"),
            Error::F1DivisibleByP => write!(f, "F1DivisibleByP: f_1 is divisible by p"),
            Error::NegativeValuationEntry { row, col } => {
                write!(f, "NegativeValuationEntry: A[{row}][{col}] has negative valuation")
            }
            Error::IdentityFails { row } => write!(f, "IdentityFails: row {row}"),
            Error::DimensionMismatch => write!(f, "dimensions are inconsistent"),
        }
    }
}

impl core::error::Error for Error {}
