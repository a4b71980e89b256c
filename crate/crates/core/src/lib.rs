//! Reduction of the two-dimensional noncommutative Heisenberg algebra
//! `[x1, x2] = i theta`, `[x_i, p_j] = i hbar delta_ij`, `[p1, p2] = i gamma`
//! to canonical form, and constructive checks of the uniqueness of its
//! representations at finite truncation.
//!
//! * [`algebra`]: structure matrix, commutators of linear combinations, phase classification.
//! * [`darboux`]: the real linear maps to canonical form on both sides of `hbar^2 = gamma theta`.
//! * [`weyl`]: phase forms of the associated Weyl systems.
//! * [`fock`]: truncated matrix realizations, defect measurements, vacua and intertwiners.
//! * [`report`]: serializable verification reports.

pub mod algebra;
pub mod darboux;
pub mod error;
pub mod fock;
pub mod report;
pub mod weyl;

pub use algebra::{
    classify, commutator, is_canonical, structure_matrix, transform_structure, AlgebraParams,
    LinComb, Phase, StructureMatrix, DEFAULT_CRITICAL_BAND,
};
pub use darboux::{
    invert, normalize, solve, solve_gamma_zero, solve_negative_delta, solve_positive_delta,
    solve_theta_zero, Branch, DarbouxCase, DarbouxMap,
};
pub use error::{Error, Result};
pub use report::{Check, VerificationReport};
pub use weyl::{
    closed_form_phase, nondegenerate, pairing_scale, weyl_group_law_check, weyl_phase,
    WeylPhaseForm,
};
