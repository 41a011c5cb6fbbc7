//! Metastable relaxation in the strong-coupling mean-field BCS model.
//!
//! The model lives on a single two-level site: every equilibrium state of the
//! mean-field theory is a product of identical 2×2 density matrices, so all
//! observables of interest reduce to exact 2×2 complex algebra. This crate
//! provides:
//!
//! - the gap equation and phase diagram ([`equilibrium`]),
//! - a detailed-balance Lindblad semigroup driving one symmetry-broken
//!   equilibrium into another, in closed form and via an independent dense
//!   superoperator oracle ([`dynamics`]),
//! - normal-coordinate analysis, monotone/metastable classification and exit
//!   times ([`metastability`]),
//! - energy-entropy balance inequalities auditing the thermodynamic stability
//!   of the intermediate states ([`stability`]).
//!
//! Everything is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`, so results are bit-identical across targets.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod matrix;
pub mod metastability;
pub mod sampling;
pub mod stability;

pub use dynamics::{
    check_detailed_balance, check_dissipativity, evolve_expectation, intermediate_state,
    lindblad_apply, liouvillian_spectrum, oracle_evolve, oracle_evolve_from, relaxation_constants,
    spectral_frame, DissipativityCheck, RelaxationConstants, SpectralFrame, Superoperator,
};
pub use equilibrium::{
    critical_beta, effective_hamiltonian, equilibrium_state, solve_gap, GapSolution, ModelParams,
};
pub use error::Error;
pub use matrix::{
    gauge_transform, is_gauge_invariant, DensityMatrix2, Eigendecomposition, HermitianMatrix2,
    Matrix2,
};
pub use metastability::{
    classify_relaxation, exit_time, invariant_exit_time, normal_modes, reference_trajectory,
    sigma_z_excursion, NormalModeDecomposition, ReferenceObservable, RelaxationClass,
    RelaxationReport,
};
pub use stability::{
    eeb_check, intermediate_frame, noninvariance_witness, normal_modes_at_t, stability_report,
    EebResult, FamilyVerdict, IntermediateFrame, ModeSet, StabilityReport,
};
