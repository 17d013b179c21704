//! Projective measurement statistics: Born probabilities, Luders updates,
//! and joint probabilities for sequences of square observables.

use super::matrix::{c, ComplexMatrix4};
use super::square::Observable;
use super::state::QuantumState;
use super::Sign;
use crate::error::{Error, Result};

/// Histories whose probability falls at or below this are treated as
/// impossible; conditioning on them is an error.
pub const ZERO_PROB_EPS: f64 = 1e-12;

/// Eigenprojector (1 + s M)/2 onto the outcome-`sign` eigenspace. Square
/// observables are involutions, so this is idempotent and the two projectors
/// for a cell are orthogonal complements.
pub fn projector(obs: &Observable, sign: Sign) -> ComplexMatrix4 {
    (ComplexMatrix4::identity() + obs.matrix().scale(c(sign.as_f64(), 0.0))).scale(c(0.5, 0.0))
}

/// P[outcome = sign] = Tr[rho P], clamped into [0, 1] against rounding.
pub fn born_prob(state: &QuantumState, obs: &Observable, sign: Sign) -> f64 {
    let p = (*state.matrix() * projector(obs, sign)).trace().re;
    p.clamp(0.0, 1.0)
}

/// Post-measurement state P rho P / Tr[P rho P]. Errors when the requested
/// outcome has (numerically) zero probability.
pub fn luders_update(state: &QuantumState, obs: &Observable, sign: Sign) -> Result<QuantumState> {
    luders_step(state, obs, sign, 0)
}

fn luders_step(
    state: &QuantumState,
    obs: &Observable,
    sign: Sign,
    step: usize,
) -> Result<QuantumState> {
    let p = projector(obs, sign);
    let updated = p * *state.matrix() * p;
    let weight = updated.trace().re;
    if weight <= ZERO_PROB_EPS {
        return Err(Error::ZeroProbabilityHistory {
            step,
            cell: obs.cell().to_string(),
        });
    }
    Ok(QuantumState::from_matrix_unchecked(
        updated.scale(c(1.0 / weight, 0.0)),
    ))
}

/// Applies a whole history of (observable, outcome) steps in order.
pub fn luders_chain(state: &QuantumState, history: &[(Observable, Sign)]) -> Result<QuantumState> {
    let mut current = state.clone();
    for (step, (obs, sign)) in history.iter().enumerate() {
        current = luders_step(&current, obs, *sign, step)?;
    }
    Ok(current)
}

/// Probability of observing the given outcome sequence when the listed
/// observables are measured one after another, computed by iterating the
/// unnormalized update rho -> P rho P. An empty sequence has probability 1;
/// impossible sequences return 0 rather than an error.
pub fn joint_prob(state: &QuantumState, sequence: &[(Observable, Sign)]) -> f64 {
    let mut t = *state.matrix();
    for (obs, sign) in sequence {
        let p = projector(obs, *sign);
        t = p * t * p;
    }
    t.trace().re.clamp(0.0, 1.0)
}
