use thiserror::Error;

use crate::semigroup::Degree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no generators given")]
    EmptyGenerators,

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator {index} is the zero vector")]
    ZeroGenerator { index: usize },

    #[error("generator {index} has a negative entry")]
    NegativeEntry { index: usize },

    #[error("generator {index} {generator} lies in the semigroup generated by the others")]
    NonMinimalGenerator { index: usize, generator: Degree },

    #[error("integer overflow in degree arithmetic")]
    Overflow,

    #[error("degree {0} is not in the semigroup")]
    NotAMember(Degree),

    #[error("degree {0} is not an object of the category")]
    NotAnObject(Degree),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("denominator divisible by the characteristic {0}")]
    NotInvertible(u64),

    #[error(
        "homogeneity violated in d_{index} entry ({row}, {col}): monomial of degree {found}, expected {expected}"
    )]
    HomogeneityViolation {
        index: usize,
        row: usize,
        col: usize,
        expected: Degree,
        found: Degree,
    },

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("not a complex: d_{index} * d_{next} is nonzero", next = .index + 1)]
    NotAComplex { index: usize },

    #[error("complex is not minimal: d_{index} entry ({row}, {col}) has a constant term")]
    NotMinimal { index: usize, row: usize, col: usize },

    #[error("entry monomial {monomial:?} is not a morphism {source_degree} -> {target_degree}")]
    EntryNotAMorphism {
        source_degree: Degree,
        target_degree: Degree,
        monomial: Vec<u32>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
