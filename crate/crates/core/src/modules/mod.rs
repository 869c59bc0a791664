//! Graded modules over truncated algebras, with the homological toolkit for
//! finite-dimensional Frobenius algebras.

pub mod builtins;
pub mod frobenius;
pub mod graded;
pub mod hom;

pub use builtins::{
    cofree_module, free_module, quotient_by_generators, quotient_by_linear_forms, regular, regular_dual, trivial,
};
pub use frobenius::{
    bass_numbers, check_frobenius, cosyzygy, ext_k, injective_envelope, matlis_dual, matlis_dual_over,
    minimal_free_resolution, minimal_injective_resolution, projective_cover, require_frobenius, stable_hom,
    strip_injective_summands, syzygy, ExtTable, FreeResolution, FrobeniusReport, ResolutionReport,
};
pub use graded::{GradedModule, ModuleMap};
pub use hom::{hom_basis, hom_dim, module_isomorphic, Verdict};
