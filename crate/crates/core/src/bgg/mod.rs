//! Complexes over a Koszul dual pair and the functors between them.

pub mod complex;
pub mod functors;
pub mod koszul;
pub mod resolve;

pub use complex::{CohomologyEntry, CohomologyTable, FreeComplex, FreeEntry, ModuleComplex};
pub use functors::{cohomology_identity, functor_f, functor_g, rhom_k_table, BggPair, IdentityReport};
pub use koszul::{koszul_complex, koszulness_probe, KoszulnessReport};
pub mod tails;
pub use tails::{
    bass_support_identity, bass_support_on, trusted_identity_range, complete_cofree_resolution, detect_period, gamma, phi, support_dimension,
    tails_hom_dims, torsion_cohomology_check, BassSupportReport, BassSupportRow, SupportDimension, TailsObject,
    TorsionReport,
};
pub use resolve::cyclic_free_resolution;
