//! Geometric phase of a round-trip light signal in an adiabatically expanding space.
//!
//! The crate models the polarization (helicity) state of a light pulse as a
//! two-component spinor on the Poincaré sphere, lifts it to the Hopf bundle
//! `S³ → S²`, and drives it through a slowly growing scale factor `χ(t)`.
//! The Berry phase picked up along the physical section of the bundle turns
//! into a frequency drift `ω̇/ω = χ̇` that is the same for every polarization.
//!
//! Modules, bottom up:
//!
//! - [`spinor`]: Jones vectors, spinors, Poincaré points and the polarization matrix.
//! - [`hopf`]: the `S³` embedding, the Hopf projection, the section and the vector potential.
//! - [`evolution`]: scale-factor models, the eikonal and exact diagonal-unitary evolution.
//! - [`geometric`]: Berry phase by connection integral, closed form and Pancharatnam product.
//! - [`anomaly`]: frequency drift, the a/b linear system and the Pioneer comparison.
//! - [`appendix`]: the dynamical Doppler counter-estimate for a moving probe.

// `!(x > 0.0)` style guards are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anomaly;
pub mod appendix;
pub mod constants;
pub mod error;
pub mod evolution;
pub mod geometric;
pub mod hopf;
pub mod phase;
pub mod spinor;
pub mod tolerance;

pub use anomaly::{
    helicity_drift, pioneer_comparison, solve_ab_system, theta_independence_sweep, AbSolution,
    AnomalyPrediction, HelicityDrift, PioneerComparison, PioneerConstants, ThetaSweep,
};
pub use appendix::{DopplerShift, ProbeState};
pub use error::{Error, Result};
pub use evolution::{
    evolve, EvolutionTrajectory, Helicity, RoundTripScenario, ScaleFactorKind, ScaleFactorModel,
};
pub use geometric::{GeometricPhaseResult, HelicityPhase, PhaseDecomposition, StateSequence};
pub use hopf::{FiberCoordinates, S3Point, VectorPotential};
pub use spinor::{JonesVector, PoincarePoint, PolarizationSpinor};
pub use tolerance::Tolerances;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
