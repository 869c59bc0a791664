//! Quadratic algebras `T(V)/(R)`, their truncations and Koszul duals.

pub mod presentation;
pub mod truncated;

pub use presentation::QuadraticPresentation;
pub use truncated::{hilbert_function, truncate_algebra, TruncatedAlgebra};
