//! Exact dense linear algebra.

pub mod field;
pub mod matrix;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{kernel_basis, quotient_basis, rank_and_rref, Matrix, Quotient, Rref};
