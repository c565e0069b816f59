use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base of a real power must be positive, got {0}")]
    NonPositiveBase(String),
    #[error("exponent {0} is not an integer or half-integer")]
    UnsupportedExponent(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not even: diagonal entry {index} is odd")]
    OddLattice { index: usize },
    #[error("form is degenerate (determinant zero)")]
    Degenerate,
    #[error("invalid divisors: {0}")]
    InvalidDivisors(String),
    #[error("quadratic form is not well defined on the group: {0}")]
    IllDefinedForm(String),
    #[error("quadratic module is degenerate: radical has {0} elements")]
    DegenerateModule(usize),
    #[error("group element coordinate {index} = {value} out of range for divisor {divisor}")]
    CoordinateOutOfRange {
        index: usize,
        value: u64,
        divisor: u64,
    },
    #[error("cyclic level must be even and positive, got {0}")]
    InvalidCyclicLevel(i64),
    #[error("term budget exceeded: {terms} terms requested, budget {budget}")]
    BudgetExceeded { terms: BigUint, budget: u64 },
    #[error("value too large for enumeration: {0}")]
    TooLarge(String),
    #[error("one-component Gauss factor vanishes")]
    VanishingGaussFactor,
    #[error("handle slide needs distinct indices, got {0} twice")]
    SlideOnSelf(usize),
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not a Lagrangian subspace: {0}")]
    NotLagrangian(String),
}
