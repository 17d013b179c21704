//! The sequential hidden-variable measurement model.
//!
//! Given a state rho and a microstate u with K recorded measurements, the
//! outcome of measuring cell (i, j) next is determined, not sampled: let F be
//! the conditional probability of outcome -1 given the recorded history
//! (computed from the state by iterated projective updates). The outcome is
//! -1 exactly when the first free coordinate u_{K+1} lies strictly below F,
//! and +1 otherwise. The update then overwrites u_{K+1} with the code for
//! (cell, outcome) and leaves every later coordinate untouched.
//!
//! All randomness thus lives in the initial microstate; the model itself is
//! a pure function. Conditional probabilities depend only on the recorded
//! codes and the target cell, so a per-state memo table makes long Monte
//! Carlo runs cheap.

use crate::error::{Error, Result};
use crate::qcore::{born_prob, luders_chain, operator_at, Cell, QuantumState, Sign};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::microstate::{macrostate, DigitCode, Microstate};

/// P(outcome = -1 at `target` | recorded `history`), from the state by
/// projective conditioning on the history.
pub fn conditional_minus_prob(
    state: &QuantumState,
    history: &[(Cell, Sign)],
    target: Cell,
) -> Result<f64> {
    let sequence: Vec<_> = history.iter().map(|&(c, s)| (operator_at(c), s)).collect();
    let conditioned = luders_chain(state, &sequence)?;
    Ok(born_prob(&conditioned, &operator_at(target), Sign::Minus))
}

/// Outcome rule: -1 iff the coordinate falls strictly below the threshold.
/// Equality (possible only for hand-built microstates, since thresholds are
/// dyadic and valid coordinates avoid them) resolves to +1.
fn decide(coordinate: f64, minus_prob: f64) -> Sign {
    if coordinate < minus_prob {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

/// An ordered record of measured cells and their outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    steps: Vec<(Cell, Sign)>,
}

impl Trajectory {
    pub fn steps(&self) -> &[(Cell, Sign)] {
        &self.steps
    }

    pub fn outcomes(&self) -> Vec<Sign> {
        self.steps.iter().map(|&(_, s)| s).collect()
    }

    pub fn outcome_at(&self, cell: Cell) -> Option<Sign> {
        self.steps
            .iter()
            .find(|&&(c, _)| c == cell)
            .map(|&(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Product of all outcomes, +1 for the empty record.
    pub fn product(&self) -> Sign {
        Sign::product(self.outcomes())
    }
}

/// Measurement engine for a fixed state, memoizing conditional probabilities
/// keyed on (recorded codes, target cell).
pub struct SequentialModel<'a> {
    state: &'a QuantumState,
    cache: HashMap<(Vec<u8>, usize), f64>,
}

impl<'a> SequentialModel<'a> {
    pub fn new(state: &'a QuantumState) -> Self {
        SequentialModel {
            state,
            cache: HashMap::new(),
        }
    }

    pub fn state(&self) -> &QuantumState {
        self.state
    }

    /// Memoized P(-1 at `target` | codes recorded in `u`).
    pub fn minus_prob(&mut self, u: &Microstate, target: Cell) -> Result<f64> {
        let key = (
            u.measured().iter().map(|c| c.value()).collect::<Vec<u8>>(),
            target.index(),
        );
        if let Some(&p) = self.cache.get(&key) {
            return Ok(p);
        }
        let p = conditional_minus_prob(self.state, &u.history(), target)?;
        self.cache.insert(key, p);
        Ok(p)
    }

    /// The outcome of measuring `cell` next, without updating the microstate.
    pub fn outcome(&mut self, u: &Microstate, cell: Cell) -> Result<Sign> {
        let threshold = self.minus_prob(u, cell)?;
        Ok(decide(u.next_coordinate(), threshold))
    }

    /// Measures `cell`, returning the updated microstate.
    pub fn apply(&mut self, u: &Microstate, cell: Cell) -> Result<Microstate> {
        let outcome = self.outcome(u, cell)?;
        Ok(u.recorded(DigitCode::encode(cell, outcome)))
    }

    /// Measures each cell of `plan` in order.
    pub fn run(&mut self, u: &Microstate, plan: &[Cell]) -> Result<(Trajectory, Microstate)> {
        self.run_with_decider(u, plan, &decide)
    }

    /// The value measuring `cell` next would reveal, discarding the update.
    /// Well defined because microstates are values: probing does not disturb.
    pub fn counterfactual(&mut self, u: &Microstate, cell: Cell) -> Result<Sign> {
        let probed = self.apply(u, cell)?;
        Ok(macrostate(&probed).expect("a measurement was just recorded"))
    }

    /// Run hook taking the outcome rule as a parameter. Exists so the
    /// verification harness can demonstrate that the consistency checks
    /// actually fail under a deliberately wrong rule; everything else goes
    /// through `run`.
    pub(crate) fn run_with_decider(
        &mut self,
        u: &Microstate,
        plan: &[Cell],
        rule: &dyn Fn(f64, f64) -> Sign,
    ) -> Result<(Trajectory, Microstate)> {
        if plan.is_empty() {
            return Err(Error::EmptyPlan);
        }
        let mut current = u.clone();
        let mut steps = Vec::with_capacity(plan.len());
        for &cell in plan {
            let threshold = self.minus_prob(&current, cell)?;
            let outcome = rule(current.next_coordinate(), threshold);
            steps.push((cell, outcome));
            current = current.recorded(DigitCode::encode(cell, outcome));
        }
        Ok((Trajectory { steps }, current))
    }
}

/// One-shot outcome of measuring `cell` on (state, u).
pub fn measurement_outcome(state: &QuantumState, u: &Microstate, cell: Cell) -> Result<Sign> {
    SequentialModel::new(state).outcome(u, cell)
}

/// One-shot update: measure `cell` and return the new microstate.
pub fn apply_measurement(state: &QuantumState, u: &Microstate, cell: Cell) -> Result<Microstate> {
    SequentialModel::new(state).apply(u, cell)
}

/// One-shot run of a measurement plan. Errors on an empty plan.
pub fn run_sequential(
    state: &QuantumState,
    u: &Microstate,
    plan: &[Cell],
) -> Result<(Trajectory, Microstate)> {
    SequentialModel::new(state).run(u, plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(row: u8, col: u8) -> Cell {
        Cell::new(row, col).unwrap()
    }

    fn singlet() -> QuantumState {
        QuantumState::singlet()
    }

    /// The worked reference microstate: coordinates 0.76, 0.51, 0.02, 0.82.
    fn reference() -> Microstate {
        Microstate::with_free(vec![0.76, 0.51, 0.02, 0.82], 0).unwrap()
    }

    #[test]
    fn singlet_thresholds_along_column_three() {
        let s = singlet();
        let u = reference();
        let mut model = SequentialModel::new(&s);
        // V33 on the singlet is certainly -1.
        assert_eq!(model.minus_prob(&u, cell(3, 3)).unwrap(), 1.0);
        // After recording it, V32 is unbiased...
        let v = apply_measurement(&s, &u, cell(3, 3)).unwrap();
        assert!((model.minus_prob(&v, cell(3, 2)).unwrap() - 0.5).abs() < 1e-15);
        // ...and once V32 came out +1, V31 must be -1 to close the row.
        let w = apply_measurement(&s, &v, cell(3, 2)).unwrap();
        assert_eq!(model.minus_prob(&w, cell(3, 1)).unwrap(), 1.0);
    }

    #[test]
    fn row_three_walk_reproduces_reference_codes() {
        let s = singlet();
        let plan = [cell(3, 3), cell(3, 2), cell(3, 1)];
        let (traj, after) = run_sequential(&s, &reference(), &plan).unwrap();
        assert_eq!(
            traj.outcomes(),
            vec![Sign::Minus, Sign::Plus, Sign::Minus],
            "0.76 < 1, 0.51 >= 0.5, 0.02 < 1"
        );
        let codes: Vec<u8> = after.measured().iter().map(|c| c.value()).collect();
        assert_eq!(codes, vec![8, 25, 6]);
        assert_eq!(after.explicit_free(), vec![0.82]);
        assert_eq!(traj.product(), Sign::Plus);
    }

    #[test]
    fn column_three_walk_reproduces_reference_codes() {
        let s = singlet();
        let plan = [cell(3, 3), cell(2, 3), cell(1, 3)];
        let (traj, after) = run_sequential(&s, &reference(), &plan).unwrap();
        assert_eq!(traj.outcomes(), vec![Sign::Minus, Sign::Minus, Sign::Minus]);
        let codes: Vec<u8> = after.measured().iter().map(|c| c.value()).collect();
        assert_eq!(codes, vec![8, 5, 2]);
        assert_eq!(traj.product(), Sign::Minus);
    }

    #[test]
    fn alternate_ordering_walk_reproduces_reference_codes() {
        // Same coordinates, plan (3,1) then (3,2) then (3,3).
        let s = singlet();
        let plan = [cell(3, 1), cell(3, 2), cell(3, 3)];
        let (traj, after) = run_sequential(&s, &reference(), &plan).unwrap();
        assert_eq!(traj.outcomes(), vec![Sign::Plus, Sign::Minus, Sign::Minus]);
        let codes: Vec<u8> = after.measured().iter().map(|c| c.value()).collect();
        assert_eq!(codes, vec![24, 7, 8]);
        // Ordering changes the record but not the row parity.
        assert_eq!(traj.product(), Sign::Plus);
    }

    #[test]
    fn repeating_a_measurement_repeats_its_outcome() {
        let s = singlet();
        let mixed = QuantumState::maximally_mixed();
        for state in [&s, &mixed] {
            for c in Cell::all() {
                for seed in 0..20 {
                    let u = Microstate::fresh(seed);
                    let (traj, _) = run_sequential(state, &u, &[c, c]).unwrap();
                    let outs = traj.outcomes();
                    assert_eq!(outs[0], outs[1], "cell {c}, seed {seed}");
                }
            }
        }
    }

    #[test]
    fn first_outcome_is_independent_of_later_plan() {
        let s = singlet();
        let u = Microstate::fresh(404);
        let first = cell(3, 2);
        let (base, _) = run_sequential(&s, &u, &[first]).unwrap();
        for follow in Cell::all() {
            let (traj, _) = run_sequential(&s, &u, &[first, follow]).unwrap();
            assert_eq!(traj.steps()[0], base.steps()[0]);
        }
    }

    #[test]
    fn update_is_local_to_the_consumed_coordinate() {
        let s = singlet();
        let u = Microstate::with_free(vec![0.76, 0.51, 0.02, 0.82], 31).unwrap();
        let v = apply_measurement(&s, &u, cell(3, 3)).unwrap();
        for m in 1..40 {
            assert_eq!(u.coordinate(m + 1), v.coordinate(m));
        }
    }

    #[test]
    fn counterfactual_probe_leaves_no_trace() {
        let s = singlet();
        let mut model = SequentialModel::new(&s);
        let u = Microstate::fresh(99);
        let direct = model.outcome(&u, cell(1, 2)).unwrap();
        let probed = model.counterfactual(&u, cell(1, 2)).unwrap();
        assert_eq!(direct, probed);
        // u itself is unchanged; a later real measurement sees the same value.
        assert_eq!(model.outcome(&u, cell(1, 2)).unwrap(), direct);
    }

    #[test]
    fn impossible_history_is_reported() {
        // Forcing V33 = +1 on the singlet has probability zero; conditioning
        // on it must fail, naming the offending step.
        let s = singlet();
        let forced = Microstate::fresh(0).recorded(DigitCode::encode(cell(3, 3), Sign::Plus));
        let err = conditional_minus_prob(&s, &forced.history(), cell(3, 2)).unwrap_err();
        assert!(matches!(
            err,
            Error::ZeroProbabilityHistory { step: 0, ref cell } if cell == "33"
        ));
    }

    #[test]
    fn empty_plan_is_an_error() {
        let s = singlet();
        assert!(matches!(
            run_sequential(&s, &Microstate::fresh(0), &[]),
            Err(Error::EmptyPlan)
        ));
    }

    #[test]
    fn memoized_thresholds_match_direct_computation() {
        let s = QuantumState::huang_bell();
        let mut model = SequentialModel::new(&s);
        let u0 = Microstate::fresh(7);
        let u1 = apply_measurement(&s, &u0, cell(2, 2)).unwrap();
        let u2 = apply_measurement(&s, &u1, cell(1, 1)).unwrap();
        for u in [&u0, &u1, &u2] {
            for target in Cell::all() {
                let cached = model.minus_prob(u, target).unwrap();
                let direct = conditional_minus_prob(&s, &u.history(), target).unwrap();
                assert_eq!(cached, direct);
                // Second lookup hits the cache and must agree too.
                assert_eq!(model.minus_prob(u, target).unwrap(), direct);
            }
        }
    }
}
