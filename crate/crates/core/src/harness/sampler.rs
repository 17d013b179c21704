//! Seeded Monte Carlo over fresh microstates.
//!
//! A fresh microstate's first K coordinates are read straight off its
//! counter-based tail, so a whole run is determined by the tail seed and the
//! conditional thresholds along the realized outcome path. The sampler
//! precomputes all thresholds of a fixed plan as a binary tree (one node per
//! outcome prefix) and then replays the decision rule without touching the
//! measurement engine, which keeps the per-run cost at a few keystream
//! blocks. Agreement with the step-by-step engine is pinned by tests.

use crate::error::{Error, Result};
use crate::hvmodel::{substream_seed, tail_coordinate, Microstate, SequentialModel};
use crate::qcore::{
    born_prob, luders_update, operator_at, Cell, QuantumState, Sign, ZERO_PROB_EPS,
};

use super::distribution::{EmpiricalDistribution, MAX_PLAN_LEN};

const ABSENT: u32 = u32::MAX;

struct Node {
    /// Conditional probability of -1 given the outcome prefix at this node.
    threshold: f64,
    minus: u32,
    plus: u32,
}

/// Precomputed conditional thresholds for one (state, plan) pair.
pub struct TrajectorySampler {
    plan: Vec<Cell>,
    nodes: Vec<Node>,
}

impl TrajectorySampler {
    pub fn new(state: &QuantumState, plan: &[Cell]) -> Result<Self> {
        if plan.is_empty() {
            return Err(Error::EmptyPlan);
        }
        if plan.len() > MAX_PLAN_LEN {
            return Err(Error::InvalidConfig(format!(
                "plan of length {} exceeds the threshold-tree limit {}",
                plan.len(),
                MAX_PLAN_LEN
            )));
        }
        let mut nodes = Vec::new();
        build(&mut nodes, state, plan, 0)?;
        Ok(TrajectorySampler {
            plan: plan.to_vec(),
            nodes,
        })
    }

    pub fn plan(&self) -> &[Cell] {
        &self.plan
    }

    /// Runs the plan on the fresh microstate with the given tail seed,
    /// writing outcomes into `out` (cleared first).
    pub fn sample(&self, tail_seed: u64, out: &mut Vec<Sign>) -> Result<()> {
        out.clear();
        let mut node = 0u32;
        for step in 0..self.plan.len() {
            let current = &self.nodes[node as usize];
            let x = tail_coordinate(tail_seed, step as u64 + 1);
            let outcome = if x < current.threshold {
                Sign::Minus
            } else {
                Sign::Plus
            };
            out.push(outcome);
            if step + 1 < self.plan.len() {
                node = match outcome {
                    Sign::Minus => current.minus,
                    Sign::Plus => current.plus,
                };
                if node == ABSENT {
                    return Err(Error::ZeroProbabilityHistory {
                        step,
                        cell: self.plan[step].to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Depth-first construction; children conditioned on outcomes that have
/// (numerically) zero probability are left absent and can never be visited,
/// because the decision rule compares a coordinate in (0, 1) strictly.
fn build(nodes: &mut Vec<Node>, state: &QuantumState, plan: &[Cell], depth: usize) -> Result<u32> {
    let obs = operator_at(plan[depth]);
    let threshold = born_prob(state, &obs, Sign::Minus);
    let index = nodes.len() as u32;
    nodes.push(Node {
        threshold,
        minus: ABSENT,
        plus: ABSENT,
    });
    if depth + 1 < plan.len() {
        if threshold > ZERO_PROB_EPS {
            let next = luders_update(state, &obs, Sign::Minus)?;
            let child = build(nodes, &next, plan, depth + 1)?;
            nodes[index as usize].minus = child;
        }
        if 1.0 - threshold > ZERO_PROB_EPS {
            let next = luders_update(state, &obs, Sign::Plus)?;
            let child = build(nodes, &next, plan, depth + 1)?;
            nodes[index as usize].plus = child;
        }
    }
    Ok(index)
}

/// Tallies `n_runs` fresh-microstate executions of `plan`. Run `k` draws its
/// tail seed from the (seed, k) substream, so partial ranges merge to the
/// same result and reruns are bit-identical.
pub fn sample_distribution(
    state: &QuantumState,
    plan: &[Cell],
    n_runs: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    sample_distribution_range(state, plan, 0..n_runs, seed)
}

/// As `sample_distribution`, over an explicit run-index range.
pub fn sample_distribution_range(
    state: &QuantumState,
    plan: &[Cell],
    runs: std::ops::Range<u64>,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    let sampler = TrajectorySampler::new(state, plan)?;
    let mut dist = EmpiricalDistribution::new();
    let mut buf = Vec::with_capacity(plan.len());
    for run in runs {
        sampler.sample(substream_seed(seed, run), &mut buf)?;
        dist.record(&buf)?;
    }
    Ok(dist)
}

/// One trace line per measurement, matching the CSV trace columns.
#[derive(Clone, Copy, Debug)]
pub struct TraceRow {
    pub run_index: u64,
    pub step: usize,
    pub row: u8,
    pub col: u8,
    pub outcome: Sign,
    pub code: u8,
}

/// As `sample_distribution`, forwarding every measurement to `sink`.
pub fn sample_distribution_traced(
    state: &QuantumState,
    plan: &[Cell],
    n_runs: u64,
    seed: u64,
    sink: &mut dyn FnMut(TraceRow),
) -> Result<EmpiricalDistribution> {
    let sampler = TrajectorySampler::new(state, plan)?;
    let mut dist = EmpiricalDistribution::new();
    let mut buf = Vec::with_capacity(plan.len());
    for run in 0..n_runs {
        sampler.sample(substream_seed(seed, run), &mut buf)?;
        for (step, (&cell, &outcome)) in plan.iter().zip(buf.iter()).enumerate() {
            sink(TraceRow {
                run_index: run,
                step,
                row: cell.row(),
                col: cell.col(),
                outcome,
                code: crate::hvmodel::DigitCode::encode(cell, outcome).value(),
            });
        }
        dist.record(&buf)?;
    }
    Ok(dist)
}

/// Negative control: same sampling plumbing, deliberately wrong outcome rule
/// (threshold biased upward, tie broken toward -1). Exists so the
/// verification suites can demonstrate they fail on a broken model.
#[doc(hidden)]
pub fn sample_distribution_corrupted(
    state: &QuantumState,
    plan: &[Cell],
    n_runs: u64,
    seed: u64,
    bias: f64,
) -> Result<EmpiricalDistribution> {
    let mut model = SequentialModel::new(state);
    let rule = move |x: f64, p: f64| {
        if x <= p + bias {
            Sign::Minus
        } else {
            Sign::Plus
        }
    };
    let mut dist = EmpiricalDistribution::new();
    for run in 0..n_runs {
        let u = Microstate::fresh(substream_seed(seed, run));
        let (traj, _) = model.run_with_decider(&u, plan, &rule)?;
        dist.record(&traj.outcomes())?;
    }
    Ok(dist)
}
