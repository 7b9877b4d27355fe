//! Čech cohomology of sheaves of forms and hypercohomology of complexes on
//! covers of P¹, P² and plane cubic and conic curves.

pub mod ambient;
pub mod cover;
pub mod engine;

pub use ambient::{Ambient, Shape};
pub use cover::{cover_plane_curve, cover_pn, embed_frac, plane_ring, simplex_name, Cover};
pub use engine::{
    cohomology_basis, differential_squares_to_zero, format_cochain, hypercohomology, sheaf_cohomology, verify_splitting, Cochain, CohomologyBasis,
    CohomologyReport, Key, Layout, Sheaf, SplitSummand, SplittingReport, TruncationPolicy,
};
