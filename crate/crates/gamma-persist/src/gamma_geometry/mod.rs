//! Exact polyhedral geometry for the γ-topology.

mod cone;
mod lp;
mod polyhedron;

#[doc(hidden)]
pub use polyhedron::{rat_mat, rat_str, rat_vec};
mod predicates;

pub use cone::{minkowski_cone, minkowski_int_cone, Cone};
pub use lp::{maximize, Lp};
pub use polyhedron::{dot, subset_of_union, unit, HPolyhedron, HalfSpace, Vector};
pub use predicates::{
    gamma_predicates, is_gamma_flat, is_gamma_locally_closed, is_gamma_proper, omega_to_z, z_to_omega, GammaPredicates,
};
