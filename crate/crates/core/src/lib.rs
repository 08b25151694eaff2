//! Finite-dimensional algebra of pseudo-observables.
//!
//! Every pseudo-observable is a `d × d` complex matrix of components in the
//! computational dyad basis. Other bases are values, not representations.

pub mod algebra;
pub mod bases;
pub mod error;
pub mod literal;
pub mod measurement;
pub mod random;
pub mod spectral;
pub mod states;
pub mod tolerance;

pub use algebra::{component, components_in, reconstruct, CMatrix, CVector, Observable, Projector, PseudoObservable};
pub use bases::{basis_change, complete_compatible_basis, make_basis, BasisChange, CompatibleBasis, DyadBasis, ProjectorBasis};
pub use error::{AlgebraError, Result};
pub use measurement::{
    born_rule, conditional_expectation, conditional_expectation_routes, deviation_variance, expectation, expectation_real, is_leq,
    make_density, matrix_element, outcome_distribution, project_density, project_observable, transition_matrix, uncertainty_check,
    ConditionalRoutes, DensityObservable, Dispersion, TransitionMatrix, UncertaintyCheck,
};
pub use num_complex::Complex64;
pub use spectral::{
    apply_function, bilateral_eigenspace, check_left_eigenvector, check_right_eigenvector, decompose, inner, norm, trace,
    BilateralEigenspace, SpectralDecomposition,
};
pub use states::{
    eigenstate_set_through, equivalent_set, gram_schmidt, left_action, lemma_elementary_equality, lemma_elementary_equality_with,
    make_state_vectors, orthonormal_basis_to_eigenstate_set, verify_characterization, wave_function, Characterization,
    LabeledEigenstates, StateVectorSet, WaveFunction,
};
pub use tolerance::Tolerances;
