//! Deterministic hidden-variable model reproducing sequential measurement
//! statistics of the magic square.
//!
//! The model splits into the microstate representation (`microstate`) and
//! the measurement dynamics over it (`model`). Outcomes are a pure function
//! of (state, microstate, plan); all randomness enters through the choice of
//! initial microstate.

mod microstate;
mod model;

pub(crate) use microstate::tail_coordinate;
pub use microstate::{is_valid_free, macrostate, substream_seed, DigitCode, Microstate};
pub use model::{
    apply_measurement, conditional_minus_prob, measurement_outcome, run_sequential,
    SequentialModel, Trajectory,
};
