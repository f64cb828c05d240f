//! Independent verification engines.
//!
//! Nothing in this module trusts the closed formulas elsewhere in the crate:
//! [`search`] minimizes (1/4)Tr[h S V Sᵀ] over the symplectic group directly,
//! [`rearrangement`] samples the trace inequality the minimization rests on,
//! and [`fock`] re-derives moments, entropies, ergotropies, and relative
//! entropies from dense truncated Fock-space matrices.

mod fock;
mod rearrangement;
mod search;

pub use fock::{
    build_fock_operators, even_cat_projector, fock_energy, fock_moments_and_entropy,
    fock_standard_ergotropy, fock_state_projector, gibbs_beta_for_entropy, gibbs_density_matrix,
    non_gaussian_work_potential, passive_density_matrix, relative_entropy, squeezed_vacuum_vector,
    thermal_density_matrix, von_neumann_entropy, ComplexMatrix, FockOperatorSet,
    DEFAULT_TAIL_LIMIT,
};
pub use rearrangement::{check_rearrangement_lemma, rearrangement_margin, RearrangementSweep};
pub use search::{
    minimize_passive_energy_gradient, minimize_passive_energy_numerical, SearchOutcome,
    SymplecticSearchConfig,
};
