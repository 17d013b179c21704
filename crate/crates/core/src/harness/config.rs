//! Run configuration and the top-level Monte Carlo entry point.

use crate::contexts::Context;
use crate::error::{Error, Result};
use crate::expsuite::ReplayId;
use crate::qcore::{Cell, QuantumState};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

use super::distribution::{oracle_distribution, tuple_label, tv_distance, MAX_PLAN_LEN};
use super::sampler::sample_distribution;

/// Where the state comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// One of the built-in names: singlet, mixed, huang-bell, hasegawa-bell.
    Named(String),
    /// A density-matrix JSON file.
    File(PathBuf),
}

impl StateSpec {
    /// Treats known names as names and anything else as a path.
    pub fn parse(token: &str) -> StateSpec {
        match token {
            "singlet" | "mixed" | "huang-bell" | "hasegawa-bell" => {
                StateSpec::Named(token.to_string())
            }
            other => StateSpec::File(PathBuf::from(other)),
        }
    }

    pub fn resolve(&self) -> Result<QuantumState> {
        match self {
            StateSpec::Named(name) => QuantumState::named(name),
            StateSpec::File(path) => QuantumState::load(path),
        }
    }
}

/// What gets measured, in which order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanSpec {
    /// Explicit cell list, measured left to right.
    Sequential(Vec<Cell>),
    /// A whole context, realized in its configured ordering.
    Simultaneous(Context),
    /// The plan of one bundled reference experiment.
    Experiment(ReplayId),
}

impl PlanSpec {
    pub fn cells(&self) -> Vec<Cell> {
        match self {
            PlanSpec::Sequential(cells) => cells.clone(),
            PlanSpec::Simultaneous(ctx) => ctx.ordering().to_vec(),
            PlanSpec::Experiment(id) => id.plan().cells().to_vec(),
        }
    }

    /// Parses the compact comma-separated cell list, e.g. "33,32,31".
    pub fn parse_sequential(text: &str) -> Result<PlanSpec> {
        let cells = text
            .split(',')
            .map(|tok| tok.trim().parse::<Cell>())
            .collect::<Result<Vec<Cell>>>()?;
        Ok(PlanSpec::Sequential(cells))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub state: StateSpec,
    pub plan: PlanSpec,
    pub n_runs: u64,
    pub seed: u64,
    /// Total-variation bound the empirical distribution must meet.
    pub tolerance: f64,
    /// Echoed into the report; the caller does the writing.
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::InvalidConfig("n_runs must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} outside (0, 1)",
                self.tolerance
            )));
        }
        let len = self.plan.cells().len();
        if len == 0 {
            return Err(Error::EmptyPlan);
        }
        if len > MAX_PLAN_LEN {
            return Err(Error::InvalidConfig(format!(
                "plan of length {len} exceeds the limit {MAX_PLAN_LEN}"
            )));
        }
        Ok(())
    }
}

/// Everything a `run` invocation reports.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub config: RunConfig,
    pub counts: BTreeMap<String, u64>,
    pub frequencies: BTreeMap<String, f64>,
    pub oracle: BTreeMap<String, f64>,
    pub tv_distance: f64,
    pub pass: bool,
}

/// Samples the configured plan and compares the tally against the exact
/// sequence probabilities.
pub fn monte_carlo(config: &RunConfig) -> Result<MonteCarloReport> {
    config.validate()?;
    let state = config.state.resolve()?;
    let cells = config.plan.cells();
    let dist = sample_distribution(&state, &cells, config.n_runs, config.seed)?;
    let oracle = oracle_distribution(&state, &cells)?;
    let tv = tv_distance(&dist, &oracle)?;
    Ok(MonteCarloReport {
        config: config.clone(),
        counts: dist
            .counts()
            .iter()
            .map(|(k, &v)| (tuple_label(k), v))
            .collect(),
        frequencies: dist
            .frequencies()
            .into_iter()
            .map(|(k, v)| (tuple_label(&k), v))
            .collect(),
        oracle: oracle.iter().map(|(k, &v)| (tuple_label(k), v)).collect(),
        tv_distance: tv,
        pass: tv <= config.tolerance,
    })
}
