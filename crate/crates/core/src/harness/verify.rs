//! Statistical verification suites: sampled model behavior against exact
//! quantum predictions, at configurable scale.

use crate::contexts::{apply_context, value_table, Context, ContextKind};
use crate::error::Result;
use crate::hvmodel::{substream_seed, Microstate, SequentialModel};
use crate::qcore::{born_prob, operator_at, Cell, QuantumState, Sign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::distribution::{oracle_distribution, tv_distance};
use super::sampler::{sample_distribution, TrajectorySampler};

#[derive(Clone, Debug, Serialize)]
pub struct VerificationCase {
    pub label: String,
    pub statistic: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub cases: Vec<VerificationCase>,
    pub pass: bool,
}

impl VerificationReport {
    fn from_cases(name: &str, cases: Vec<VerificationCase>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        VerificationReport {
            name: name.to_string(),
            cases,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationCase> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

fn case(label: String, statistic: f64, bound: f64) -> VerificationCase {
    VerificationCase {
        label,
        statistic,
        bound,
        pass: statistic <= bound,
    }
}

/// The states every suite runs against: the two distinguished ones plus
/// three seeded random pure states.
pub fn standard_state_set(seed: u64) -> Vec<(String, QuantumState)> {
    let mut states = vec![
        ("singlet".to_string(), QuantumState::singlet()),
        ("mixed".to_string(), QuantumState::maximally_mixed()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 1..=3 {
        states.push((format!("random-{k}"), QuantumState::random_pure(&mut rng)));
    }
    states
}

fn join_plan(plan: &[Cell]) -> String {
    plan.iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// All length-1 and length-2 plans, plus a stratified sample of 100
/// length-3 plans (even coverage of the first cell).
fn theorem1_plans(seed: u64) -> Vec<Vec<Cell>> {
    let cells: Vec<Cell> = Cell::all().collect();
    let mut plans: Vec<Vec<Cell>> = Vec::with_capacity(9 + 81 + 100);
    for &a in &cells {
        plans.push(vec![a]);
    }
    for &a in &cells {
        for &b in &cells {
            plans.push(vec![a, b]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (stratum, &a) in cells.iter().enumerate() {
        let quota = if stratum == 0 { 12 } else { 11 };
        let mut picks = rand::seq::index::sample(&mut rng, 81, quota).into_vec();
        picks.sort_unstable();
        for pick in picks {
            let b = cells[pick / 9];
            let c = cells[pick % 9];
            plans.push(vec![a, b, c]);
        }
    }
    plans
}

/// Compares sampled and exact distributions for every plan of length up to
/// three, on every given state.
pub fn verify_theorem1(
    states: &[(String, QuantumState)],
    n_runs: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let plans = theorem1_plans(substream_seed(seed, u64::from(u32::MAX)));
    let mut cases = Vec::with_capacity(states.len() * plans.len());
    let mut arm = 0u64;
    for (name, state) in states {
        for plan in &plans {
            let case_seed = substream_seed(seed, arm);
            arm += 1;
            let dist = sample_distribution(state, plan, n_runs, case_seed)?;
            let oracle = oracle_distribution(state, plan)?;
            let tv = tv_distance(&dist, &oracle)?;
            cases.push(case(
                format!("{name} len{} [{}]", plan.len(), join_plan(plan)),
                tv,
                tol,
            ));
        }
    }
    Ok(VerificationReport::from_cases("theorem1", cases))
}

fn mismatch_fraction(
    state: &QuantumState,
    plan: &[Cell],
    seed: u64,
    n_runs: u64,
    disagree: impl Fn(&[Sign]) -> bool,
) -> Result<f64> {
    let sampler = TrajectorySampler::new(state, plan)?;
    let mut buf = Vec::with_capacity(plan.len());
    let mut mismatches = 0u64;
    for run in 0..n_runs {
        sampler.sample(substream_seed(seed, run), &mut buf)?;
        if disagree(&buf) {
            mismatches += 1;
        }
    }
    Ok(mismatches as f64 / n_runs as f64)
}

/// Re-measuring an already measured cell, after compatible measurements in
/// between, must reproduce the original outcome in every trajectory.
pub fn verify_corollary(
    states: &[(String, QuantumState)],
    n_runs: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    let mut arm = 0u64;
    for (name, state) in states {
        for kind in ContextKind::ALL {
            let line = kind.cells();
            for &a in &line {
                for &b in &line {
                    if a == b {
                        continue;
                    }
                    let case_seed = substream_seed(seed, arm);
                    arm += 1;
                    let fraction =
                        mismatch_fraction(state, &[a, b, a], case_seed, n_runs, |out| {
                            out[2] != out[0]
                        })?;
                    cases.push(case(
                        format!("{name} {kind} repeat {a} across {b}"),
                        fraction,
                        0.0,
                    ));
                }
            }
            let case_seed = substream_seed(seed, arm);
            arm += 1;
            let plan = [line[0], line[1], line[2], line[0]];
            let fraction =
                mismatch_fraction(state, &plan, case_seed, n_runs, |out| out[3] != out[0])?;
            cases.push(case(
                format!("{name} {kind} full-line repeat"),
                fraction,
                0.0,
            ));
        }
    }
    Ok(VerificationReport::from_cases("corollary", cases))
}

/// After running a whole context, the counterfactual value table must
/// satisfy that context's parity constraint, in every sample.
pub fn verify_cup(
    states: &[(String, QuantumState)],
    n_runs: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    let mut arm = 0u64;
    for (name, state) in states {
        let mut model = SequentialModel::new(state);
        for kind in ContextKind::ALL {
            let context = Context::canonical(kind);
            let case_seed = substream_seed(seed, arm);
            arm += 1;
            let mut violations = 0u64;
            for run in 0..n_runs {
                let u = Microstate::fresh(substream_seed(case_seed, run));
                let (_, after) = apply_context(&mut model, &u, &context)?;
                if !value_table(&mut model, &after)?.satisfies(kind) {
                    violations += 1;
                }
            }
            cases.push(case(
                format!("{name} {kind}"),
                violations as f64 / n_runs as f64,
                0.0,
            ));
        }
    }
    Ok(VerificationReport::from_cases("cup", cases))
}

/// The (1,1) marginal must not depend on whether its row or its column was
/// measured first, and both must match the exact single-shot probability.
pub fn verify_marginals(
    states: &[(String, QuantumState)],
    n_runs: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let corner = Cell::new(1, 1).expect("in range");
    let row_plan = Context::canonical(ContextKind::Row1).ordering().to_vec();
    let col_plan = Context::canonical(ContextKind::Col1).ordering().to_vec();
    assert_eq!(row_plan[2], corner);
    assert_eq!(col_plan[2], corner);

    let mut cases = Vec::new();
    let mut arm = 0u64;
    for (name, state) in states {
        let plus_fraction = |plan: &[Cell], arm: u64| -> Result<f64> {
            let sampler = TrajectorySampler::new(state, plan)?;
            let mut buf = Vec::with_capacity(plan.len());
            let mut plus = 0u64;
            let case_seed = substream_seed(seed, arm);
            for run in 0..n_runs {
                sampler.sample(substream_seed(case_seed, run), &mut buf)?;
                if buf[2] == Sign::Plus {
                    plus += 1;
                }
            }
            Ok(plus as f64 / n_runs as f64)
        };
        let p_row = plus_fraction(&row_plan, arm)?;
        let p_col = plus_fraction(&col_plan, arm + 1)?;
        arm += 2;
        let exact = born_prob(state, &operator_at(corner), Sign::Plus);
        cases.push(case(
            format!("{name} row1-order vs col1-order"),
            (p_row - p_col).abs(),
            tol,
        ));
        cases.push(case(
            format!("{name} row1-order vs exact"),
            (p_row - exact).abs(),
            tol,
        ));
        cases.push(case(
            format!("{name} col1-order vs exact"),
            (p_col - exact).abs(),
            tol,
        ));
    }
    Ok(VerificationReport::from_cases("marginals", cases))
}
