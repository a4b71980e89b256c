//! Truncated Fock-space realizations and the numerical checks run on them.
//!
//! Every algebra relation holds only away from the top level of a truncation,
//! so checks compress onto an interior `{ index < n - margin }` in each factor.

mod defect;
mod linalg;
mod operator;
mod rep;
mod vacuum;

pub use defect::{
    algebra_checks, commutator_defect, generator_names, phase_convergence, phase_defect,
    weyl_numeric, DefectReport, PhaseConvergence, WeylFamily, CONVERGENCE_JITTER, PHASE_BLOCK,
    ROUNDING_FLOOR,
};
pub use linalg::{
    dense_spectral_norm, expi_hermitian, max_modulus, random_unitary, CMatrix, CVector,
    DENSE_NORM_LIMIT,
};
pub use operator::{real_combination, Layout, OperatorMatrix};
pub use rep::{
    canonical_pair, hs_inner, hs_rep, ladder, ladder_matrix, position_ops, realize_nc,
    two_mode_canonical, FockRep, FockSpace, HSState, RepTarget, DEFAULT_MARGIN, MIN_DIM,
};
pub use vacuum::{
    conjugate_rep, intertwiner, number_basis, vacuum_space, Intertwiner, VacuumSpace,
    BREAKDOWN_NORM, DEFAULT_VACUUM_TOL,
};
