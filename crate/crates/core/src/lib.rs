//! Simulation of entanglement recovery between two identical qubits that are
//! exposed to local noise both before and after a spatial deformation,
//! followed by a spatially localized projection with postselection.
//!
//! The process runs in four stages:
//!
//! 1. the singlet of two distinguishable qubits decoheres under a phase
//!    damping, depolarizing or amplitude damping environment ([`noise`]);
//! 2. at the deformation time the spatial wave functions are made to overlap
//!    on two regions `L` and `R` ([`deform`]);
//! 3. the now indistinguishable pair keeps decohering with overlap-dependent
//!    effective rates ([`dynamics`]);
//! 4. a projection onto "one particle per region" returns a distinguishable
//!    state and its postselection probability ([`slocc`]), on which the
//!    concurrence and the singlet fidelity are evaluated ([`metrics`]).
//!
//! [`pipeline`] composes the stages, and [`cli`] drives parameter sweeps and
//! the oracle cross-checks collected in [`oracle`].

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod deform;
pub mod dynamics;
mod linalg;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod pipeline;
pub mod qstate;
pub mod slocc;

pub use deform::{DeformationCoeffs, SignPattern, Statistics};
pub use dynamics::EffectiveRates;
pub use metrics::MetricReport;
pub use noise::{BathParams, ChannelKind, KrausPair};
pub use pipeline::{DeformationSpec, Scenario, ScenarioResult};
pub use qstate::{Basis, DensityMatrix, PopulationVector, XStateParams};
pub use slocc::SloccOutcome;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
