//! Empirical outcome distributions and their comparison to exact ones.

use crate::error::{Error, Result};
use crate::qcore::{joint_prob, operator_at, Cell, QuantumState, Sign};
use std::collections::BTreeMap;

/// Longest measurement plan the exhaustive oracle will enumerate; both the
/// tuple space and the threshold tree grow as 2^len.
pub const MAX_PLAN_LEN: usize = 16;

/// Tally of outcome tuples from repeated runs of one fixed plan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<Vec<i8>, u64>,
    total: u64,
    arity: Option<usize>,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, tuple: &[Sign]) -> Result<()> {
        match self.arity {
            None => self.arity = Some(tuple.len()),
            Some(a) if a != tuple.len() => {
                return Err(Error::ArityMismatch {
                    left: a,
                    right: tuple.len(),
                })
            }
            Some(_) => {}
        }
        let mut buf = [0i8; MAX_PLAN_LEN];
        if tuple.len() <= MAX_PLAN_LEN {
            let key = &mut buf[..tuple.len()];
            for (slot, s) in key.iter_mut().zip(tuple) {
                *slot = s.as_i8();
            }
            match self.counts.get_mut(&key[..]) {
                Some(count) => *count += 1,
                None => {
                    self.counts.insert(key.to_vec(), 1);
                }
            }
        } else {
            let key: Vec<i8> = tuple.iter().map(|s| s.as_i8()).collect();
            *self.counts.entry(key).or_insert(0) += 1;
        }
        self.total += 1;
        Ok(())
    }

    pub fn counts(&self) -> &BTreeMap<Vec<i8>, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn arity(&self) -> Option<usize> {
        self.arity
    }

    pub fn frequency(&self, tuple: &[i8]) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(tuple).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn frequencies(&self) -> BTreeMap<Vec<i8>, f64> {
        self.counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / self.total as f64))
            .collect()
    }

    /// Combines tallies from disjoint run ranges. The empty tally is neutral.
    pub fn merge(mut self, other: EmpiricalDistribution) -> Result<EmpiricalDistribution> {
        match (self.arity, other.arity) {
            (Some(a), Some(b)) if a != b => return Err(Error::ArityMismatch { left: a, right: b }),
            (None, Some(b)) => self.arity = Some(b),
            _ => {}
        }
        for (key, count) in other.counts {
            *self.counts.entry(key).or_insert(0) += count;
        }
        self.total += other.total;
        Ok(self)
    }
}

/// Exact tuple probabilities for measuring `plan` in order on `state`,
/// covering the full outcome space including zero-probability tuples.
pub fn oracle_distribution(state: &QuantumState, plan: &[Cell]) -> Result<BTreeMap<Vec<i8>, f64>> {
    if plan.is_empty() {
        return Err(Error::EmptyPlan);
    }
    if plan.len() > MAX_PLAN_LEN {
        return Err(Error::InvalidConfig(format!(
            "plan of length {} exceeds the exhaustive-oracle limit {}",
            plan.len(),
            MAX_PLAN_LEN
        )));
    }
    let observables: Vec<_> = plan.iter().map(|&c| operator_at(c)).collect();
    let mut out = BTreeMap::new();
    for bits in 0u32..(1 << plan.len()) {
        let sequence: Vec<_> = observables
            .iter()
            .enumerate()
            .map(|(k, obs)| {
                let sign = if bits >> k & 1 == 1 {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                (obs.clone(), sign)
            })
            .collect();
        let key: Vec<i8> = sequence.iter().map(|&(_, s)| s.as_i8()).collect();
        out.insert(key, joint_prob(state, &sequence));
    }
    Ok(out)
}

/// Total variation distance between a tally and exact probabilities over the
/// same tuple space.
pub fn tv_distance(emp: &EmpiricalDistribution, oracle: &BTreeMap<Vec<i8>, f64>) -> Result<f64> {
    if let (Some(a), Some(key)) = (emp.arity(), oracle.keys().next()) {
        if a != key.len() {
            return Err(Error::ArityMismatch {
                left: a,
                right: key.len(),
            });
        }
    }
    let mut acc = 0.0;
    for (key, p) in oracle {
        acc += (emp.frequency(key) - p).abs();
    }
    for (key, &count) in emp.counts() {
        if !oracle.contains_key(key) {
            acc += count as f64 / emp.total() as f64;
        }
    }
    Ok(acc / 2.0)
}

/// Human-readable form of an outcome tuple, e.g. "-1,+1,-1".
pub fn tuple_label(tuple: &[i8]) -> String {
    tuple
        .iter()
        .map(|v| {
            if *v >= 0 {
                format!("+{v}")
            } else {
                v.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}
