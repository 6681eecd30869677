//! Exact dense linear algebra over the rationals and prime fields.

mod field;
mod matrix;
mod subspace;

pub use field::{FieldSpec, Scalar};
pub(crate) use matrix::rref_rows;
pub use matrix::{rref, IndependentSet, Matrix};
pub use subspace::{kernel_of, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("unrecognised field `{0}` (expected Q or F<p>)")]
    BadField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("entries from different fields")]
    FieldMismatch,
    #[error("rows of unequal length")]
    Ragged,
}
