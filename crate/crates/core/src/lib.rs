//! Simulation and verification toolkit for the Mermin-Peres magic square.
//!
//! The crate is organized in five layers:
//!
//! * [`qcore`] - the quantum side: 4x4 complex matrices, the nine two-qubit
//!   square observables, density matrices, Born probabilities, Luders updates
//!   and joint sequential probabilities. This is the oracle everything else
//!   is checked against.
//! * [`hvmodel`] - a deterministic hidden-variable account of sequential
//!   measurement. A microstate is an infinite sequence of coordinates in
//!   (0, 1); measuring overwrites the next coordinate with an integer code
//!   recording which observable fired and what it produced.
//! * [`contexts`] - the six measurement contexts (three rows, three columns),
//!   counterfactual value tables, parity-constraint membership, and the
//!   exhaustive Kochen-Specker check over all 512 sign tables.
//! * [`expsuite`] - bit-exact replays of five bundled reference experiments
//!   plus idealized reanalyses of three published experimental setups.
//! * [`harness`] - seeded Monte Carlo over fresh microstates, empirical
//!   distributions, total-variation comparison against the oracle, and the
//!   statistical verification suites.

pub mod contexts;
pub mod error;
pub mod expsuite;
pub mod harness;
pub mod hvmodel;
pub mod qcore;

pub use contexts::{Context, ContextKind, ValueTable};
pub use error::{Error, Result};
pub use expsuite::{
    analyze_cabello, analyze_hasegawa, analyze_huang, replay, CabelloResult, HasegawaResult,
    HuangResult, ReplayId, ReplayReport,
};
pub use harness::{
    monte_carlo, EmpiricalDistribution, MonteCarloReport, PlanSpec, RunConfig, StateSpec,
    VerificationReport,
};
pub use hvmodel::{DigitCode, Microstate, Trajectory};
pub use qcore::{Cell, ComplexMatrix4, Observable, QuantumState, Sign};
