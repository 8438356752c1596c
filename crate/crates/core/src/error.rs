use alloc::string::String;

/// Errors raised by constructors and algorithms in this crate.
///
/// Checkers that produce reports (`validate_complex`, `check_symmetric`, ...)
/// never return these; they collect failures instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("operation not supported over {0}")]
    UnsupportedRing(String),
    #[error("d∘d ≠ 0 at degree {degree}")]
    NotAChainComplex { degree: i64 },
    #[error("not a chain map: d f ≠ f d at degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("structure relations fail: {0}")]
    InvalidStructure(String),
    #[error("not Poincaré: {0}")]
    NotPoincare(String),
    #[error("cokernel has torsion {0:?}; input violates the Poincaré hypothesis")]
    TorsionCokernel(alloc::vec::Vec<i128>),
    #[error("form does not descend to the cokernel: {0}")]
    NonDescending(String),
    #[error("singular form: {0}")]
    Singular(String),
    #[error("form is not even: {0}")]
    NotEven(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
