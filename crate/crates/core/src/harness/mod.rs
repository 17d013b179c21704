//! Monte Carlo engine, empirical statistics, and verification suites.
//!
//! Everything here is seeded and bit-reproducible: run `k` of a job draws
//! its coordinates from a substream derived from `(seed, k)`, so reruns,
//! partial ranges, and merges all agree exactly.

mod config;
mod distribution;
mod sampler;
mod verify;

pub use config::{monte_carlo, MonteCarloReport, PlanSpec, RunConfig, StateSpec};
pub use distribution::{
    oracle_distribution, tuple_label, tv_distance, EmpiricalDistribution, MAX_PLAN_LEN,
};
#[doc(hidden)]
pub use sampler::sample_distribution_corrupted;
pub use sampler::{
    sample_distribution, sample_distribution_range, sample_distribution_traced, TraceRow,
    TrajectorySampler,
};
pub use verify::{
    standard_state_set, verify_corollary, verify_cup, verify_marginals, verify_theorem1,
    VerificationCase, VerificationReport,
};
