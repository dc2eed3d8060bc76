//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a representable finite field: p = {p}, k = {k}")]
    InvalidField { p: u64, k: u32 },
    #[error("division by zero in a finite field")]
    DivisionByZero,
    #[error("field carries no bar involution")]
    NoBar,
    #[error("norm equation target is zero or not in the fixed subfield")]
    DegenerateTarget,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("matrix is singular")]
    SingularElement,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("form is degenerate")]
    Degenerate,
    #[error("matrix is not an isometry of the form")]
    NotIsometry,
    #[error("element does not lie in the group")]
    NotInGroup,
    #[error("group specification is invalid: {0}")]
    InvalidSpec(String),
    #[error("enumeration cap exceeded: group order {order} > cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("forms are not congruent")]
    NotCongruent,
    #[error("elements are not conjugate")]
    NotConjugate,
    #[error("{0}")]
    Unsupported(String),
}
