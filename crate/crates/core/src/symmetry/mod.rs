//! Lie point symmetries of the Euler-Lagrange system and their images.

pub mod family;
pub mod field;
pub mod jet;
pub mod noether;
pub mod pushforward;
pub mod solve;

pub use family::{transcribed_relations, FamilyTerm, SymParams, SymmetryFamily, PARAM_NAMES};
pub use field::{lie_bracket, PolyField};
pub use jet::{
    determining_residuals, prolong, variational_residual, JetSpace, JetVectorField, ProlongedField,
};
pub use noether::{
    charge_vars, conservation_residual, expected_family_charge, family_noether_charge,
    noether_charge, noether_charge_of,
};
pub use pushforward::{
    displayed_canonical_field, displayed_x, dynamics_commutator, dynamics_field, ext5_vars,
    ext_canonical_vars, first_order_symmetry_residual, pushforward, pushforward_legendre,
    pushforward_phi, CommutatorClass, ExtendedVectorField5, PushTarget, PushedField,
};
pub use solve::{
    determining_system, expand_in, same_span, solve_determining, span_dimension,
    symmetry_commutator_table,
};
