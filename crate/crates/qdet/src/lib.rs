//! Total detection probability of repeatedly monitored quantum systems.
//!
//! A particle evolves unitarily on a finite graph (or any discrete Hermitian
//! system) and is probed by projective detection attempts at times τ, 2τ, …
//! The first successful attempt stops the run; `P_det` is the probability the
//! detector ever clicks. This crate computes `P_det` three independent ways
//! and bounds it from both sides:
//!
//! * [`detection::exact_pdet`] — the exact spectral formula, built from the
//!   eigendecomposition of the Hamiltonian and the degeneracy structure of its
//!   levels;
//! * [`strobe`] — direct simulation of the measurement protocol, both through
//!   the first-detection amplitude recursion and through Monte Carlo
//!   trajectories implementing the collapse postulate;
//! * [`bounds`] — lower bounds (energy-fluctuation/uncertainty relation, path
//!   counting, shell states, two-seed strategies) and the symmetry upper bound
//!   `1/ν` from counting equivalent initial states.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded use. File formats, CLI, and JSON/CSV output live
//! in the companion `qdet-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod bounds;
pub mod detection;
pub mod error;
pub mod graph;
mod linalg;
pub mod spectral;
pub mod strobe;

pub use error::{Error, Result};
pub use graph::{GraphSpec, Hamiltonian, State, StateSpec};
pub use spectral::{EnergyLevel, SpectralDecomposition, Unitary};

/// Default tolerances used by the zero tests scattered through the crate.
///
/// Every tolerance can be overridden at the call sites that take an explicit
/// epsilon; these are the values used by the convenience entry points.
pub mod tol {
    /// Coefficient of the scale-aware zero test for `⟨ψ|Ĥ^s|d⟩` in distance
    /// computations; the effective threshold is `1e-10 · (norm bound)^s`.
    pub const EPS_ZERO: f64 = 1e-10;
    /// Relative degeneracy tolerance: eigenvalues closer than
    /// `EPS_DEG_REL · (E_max − E_min)` are merged into one level.
    pub const EPS_DEG_REL: f64 = 1e-9;
    /// Circle-distance tolerance for flagging exceptional detection periods.
    pub const EPS_RES: f64 = 1e-8;
    /// Zero test for the per-level denominator of the exact formula.
    pub const EPS_BRIGHT: f64 = 1e-10;
    /// Relative residual below which the Krylov construction terminates.
    pub const EPS_RANK: f64 = 1e-9;
    /// Coefficient of the scale-aware variance-degeneracy test in the
    /// uncertainty bound.
    pub const EPS_VAR: f64 = 1e-12;
    /// Amplitude-equality tolerance for the equivalent-state search.
    pub const EPS_EQ: f64 = 1e-9;
}
