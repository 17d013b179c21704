//! Reference replays and reanalyses of published experiments.
//!
//! `replay` reruns the five bundled single-trajectory records bit-exactly
//! from a shared starting microstate. The three `analyze_*` functions rerun
//! whole published experiments under this model at volume, each returning
//! per-run records, aggregates, the exact quantum prediction, and the
//! originally reported numbers for comparison.

mod cabello;
mod hasegawa;
mod huang;
mod replay;

pub use cabello::{
    analyze_cabello, relations_on_table, sub_experiment_plans, CabelloAggregates, CabelloOracle,
    CabelloReference, CabelloResult, CabelloRun, SUB_EXPERIMENTS,
};
pub use hasegawa::{
    analyze_hasegawa, HasegawaAggregates, HasegawaOracle, HasegawaReference, HasegawaResult,
    HasegawaRun, SpinAxis,
};
pub use huang::{
    analyze_huang, huang_mapped_state, HuangAggregates, HuangOracle, HuangReference, HuangResult,
    HuangRun,
};
pub use replay::{
    reference_microstate, replay, MembershipNote, ReplayId, ReplayPlan, ReplayReport, ReplayStep,
    UnobservedBlock,
};
