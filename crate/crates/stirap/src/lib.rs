//! Stimulated Raman adiabatic passage into near-degenerate final-level
//! manifolds.
//!
//! A Λ-type chain whose final "state" is a pair (or triple) of closely
//! spaced levels coupled by constant control fields supports two dark
//! states at once, one per root of the null-eigenvalue detuning condition.
//! Driving the chain with delayed, counterintuitively ordered pump and
//! Stokes pulses then transfers the population from level 1 into a
//! preselected coherent superposition of the manifold levels — no
//! multi-photon resonance required.
//!
//! The crate provides:
//!
//! - [`model`]: scenario configuration, Gaussian/constant pulse envelopes,
//!   and the instantaneous rotating-wave Hamiltonian (4 and 5 levels);
//! - [`analytics`]: the closed-form theory — null detunings, mixing angles,
//!   dark states, target superpositions, population ratios, and inverse
//!   design of detunings for a requested superposition;
//! - [`propagator`]: fixed-step RK4 integration of the Schrödinger
//!   equation with norm-drift monitoring;
//! - [`diagnostics`]: instantaneous eigenvalue spectra (cyclic Jacobi),
//!   mixing-angle rates, adiabaticity margins, and dark-state fidelity;
//! - [`scenario`]: the builtin reference scenarios;
//! - [`sweep`]: deterministic single-field parameter sweeps;
//! - [`config`]/[`io`]: the flat key-value config format and CSV writers.
//!
//! With the default `parallel` feature, sweeps and spectrum scans fan out
//! over rayon; disabling it leaves the sequential code path only.

pub mod analytics;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod model;
pub mod propagator;
pub mod scenario;
pub mod sweep;

pub use analytics::{Branch, DarkState, MixingAngles};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{PulseEnvelope, SystemConfig};
pub use propagator::{StateVector, TimeGrid, Trajectory};
pub use scenario::Scenario;
