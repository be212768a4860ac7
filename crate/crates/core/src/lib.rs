//! Gaussian wave packets for quadratic Hamiltonians, conservative and
//! dissipative, driven by the complex Riccati equation for the width.
//!
//! The layers build on each other:
//!
//! * [`models`]: physical constants, frequency profiles, model families
//! * [`dynamics`]: right-hand sides and RK4 integrators for the trajectory,
//!   Riccati, Ermakov and linearized equations
//! * [`closed_form`]: particular solutions, the Bernoulli one-parameter
//!   family and the width-branch classification
//! * [`observables`]: Ermakov invariants, uncertainties, energies
//! * [`ladder`]: ladder operators and coherent states on
//!   polynomial-times-Gaussian states
//! * [`transforms`]: maps between the physical, Caldirola–Kanai and
//!   expanding descriptions
//! * [`cli`]: scenario files and the `run`/`scan`/`compare` drivers
//!   behind the command-line tool

pub mod cli;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod ladder;
pub mod models;
pub mod observables;
pub mod quadrature;
pub mod transforms;

mod poly;

pub use num_complex::Complex64;

pub use closed_form::{
    classify_branch, general_solution, particular_solutions, BranchClass, BranchLabel, BranchReport, FamilyParameter,
};
pub use dynamics::{
    integrate, integrate_ermakov, integrate_with, ClassicalState, ErmakovState, IntegratorOptions, RiccatiVar,
    SystemState, TimeSeries,
};
pub use error::{Error, Result};
pub use ladder::{
    coherent_closed_form, coherent_state, displacement_series, inner_product, phase_adjusted_constancy,
    vacuum_state, z_eigenvalue, Eigenvalue, LadderOperators, PolyGaussianState, ZLevel,
};
pub use models::{Family, FrequencyProfile, Model, PhysicalConstants};
pub use observables::{ermakov_invariant, invariant_drift, invariant_from_riccati, uncertainties};
pub use transforms::{RepresentationTag, Tagged};
