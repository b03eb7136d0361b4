//! Exact scalars and dense linear algebra over the rationals and prime fields.

mod matrix;
mod modular;
mod reduce;
mod scalar;

pub use matrix::{EntryWitness, Matrix};
pub use reduce::{
    column_space, columns_in_span, inverse, is_invertible, kernel_basis, kernel_matrix, quotient,
    quotient_by_rows, rank, rref, solve, solve_matrix, QuotientSpace, Rref,
};
pub use scalar::{Field, Rational, Scalar};
