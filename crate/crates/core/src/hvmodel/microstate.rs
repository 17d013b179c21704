//! Microstates: the hidden variables of the sequential measurement model.
//!
//! A microstate is conceptually an infinite sequence u_1, u_2, ... of
//! coordinates in (0, 1). Measuring the square observable at cell (i, j)
//! consumes the first coordinate that is still free: the outcome is read off
//! by comparing it against a conditional probability, and the coordinate is
//! then overwritten with an integer code recording both the cell and the
//! outcome. The prefix of overwritten coordinates is the measurement record;
//! everything after it is untouched randomness.
//!
//! Coordinates never materialized explicitly are generated lazily from
//! `tail_seed` by a counter-based generator, so inspecting a coordinate is a
//! pure function of the microstate value. Copies of a microstate therefore
//! agree about every coordinate, which is what makes counterfactual
//! evaluation well defined.

use crate::error::{Error, Result};
use crate::qcore::{Cell, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Code recording one measurement: a base-3 number (d2 d1 d0) with
/// d2 in {0, 2} giving the outcome (0 is -1, 2 is +1), d1 = row - 1 and
/// d0 = col - 1. Valid values are 0..=8 and 18..=26; the band 9..=17 would
/// need d2 = 1 and is unreachable by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct DigitCode(u8);

impl DigitCode {
    pub fn new(code: u8) -> Result<Self> {
        if code <= 26 && code / 9 != 1 {
            Ok(DigitCode(code))
        } else {
            Err(Error::UnreachableCode(code))
        }
    }

    pub fn encode(cell: Cell, outcome: Sign) -> Self {
        let base = 3 * (cell.row() - 1) + (cell.col() - 1);
        let offset = match outcome {
            Sign::Minus => 0,
            Sign::Plus => 18,
        };
        DigitCode(base + offset)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn cell(self) -> Cell {
        let row = (self.0 % 9) / 3 + 1;
        let col = self.0 % 3 + 1;
        Cell::new(row, col).expect("digits are in range by construction")
    }

    pub fn outcome(self) -> Sign {
        if self.0 / 9 == 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn decode(self) -> (Cell, Sign) {
        (self.cell(), self.outcome())
    }
}

impl TryFrom<u8> for DigitCode {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        DigitCode::new(v)
    }
}

impl From<DigitCode> for u8 {
    fn from(c: DigitCode) -> u8 {
        c.0
    }
}

/// Free coordinates must be interior and avoid the measurement codes, which
/// live on the 1/27 grid.
pub fn is_valid_free(x: f64) -> bool {
    x > 0.0 && x < 1.0 && (x * 27.0).fract() != 0.0
}

/// Coordinate `index` (1-based) of the lazy tail for `seed`. Counter-based:
/// each index reads its own slice of a ChaCha8 keystream, so access order
/// does not matter.
pub(crate) fn tail_coordinate(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 8);
    loop {
        let x: f64 = rng.gen();
        if is_valid_free(x) {
            return x;
        }
    }
}

/// Derives an independent stream seed from (seed, index) without any
/// sequential state; used for per-run substreams.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.gen()
}

/// A microstate value. `measured` holds the codes written so far (the first
/// K coordinates), `free` holds explicitly materialized free coordinates at
/// positions K+1 onward, and positions beyond that come from `tail_seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MicrostateRepr", into = "MicrostateRepr")]
pub struct Microstate {
    measured: Vec<DigitCode>,
    free: VecDeque<f64>,
    tail_seed: u64,
}

impl Microstate {
    /// A microstate with no measurements and a fully lazy tail.
    pub fn fresh(tail_seed: u64) -> Self {
        Microstate {
            measured: Vec::new(),
            free: VecDeque::new(),
            tail_seed,
        }
    }

    /// A fresh microstate whose first coordinates are given explicitly.
    pub fn with_free(free: Vec<f64>, tail_seed: u64) -> Result<Self> {
        Self::from_parts(Vec::new(), free, tail_seed)
    }

    pub fn from_parts(measured: Vec<DigitCode>, free: Vec<f64>, tail_seed: u64) -> Result<Self> {
        for &x in &free {
            if !is_valid_free(x) {
                return Err(Error::InvalidFreeCoordinate(x));
            }
        }
        Ok(Microstate {
            measured,
            free: free.into(),
            tail_seed,
        })
    }

    /// Number of measurements recorded so far.
    pub fn prefix_len(&self) -> usize {
        self.measured.len()
    }

    pub fn measured(&self) -> &[DigitCode] {
        &self.measured
    }

    /// The decoded measurement record, oldest first.
    pub fn history(&self) -> Vec<(Cell, Sign)> {
        self.measured.iter().map(|c| c.decode()).collect()
    }

    /// Explicitly materialized free coordinates (positions K+1 onward).
    pub fn explicit_free(&self) -> Vec<f64> {
        self.free.iter().copied().collect()
    }

    pub fn tail_seed(&self) -> u64 {
        self.tail_seed
    }

    /// The coordinate the next measurement will consume (position K+1).
    /// Pure: repeated calls, and calls on copies, agree.
    pub fn next_coordinate(&self) -> f64 {
        self.coordinate(1)
    }

    /// Free coordinate at position K+m, m >= 1.
    pub fn coordinate(&self, m: usize) -> f64 {
        assert!(m >= 1, "coordinate positions are 1-based");
        if let Some(&x) = self.free.get(m - 1) {
            x
        } else {
            tail_coordinate(self.tail_seed, (self.measured.len() + m) as u64)
        }
    }

    /// Records a measurement code, overwriting coordinate K+1. Coordinates
    /// beyond K+1 keep their absolute positions (and hence their values).
    pub(crate) fn recorded(&self, code: DigitCode) -> Microstate {
        let mut next = self.clone();
        next.measured.push(code);
        next.free.pop_front();
        next
    }
}

/// Wire format: `{"measured": [8, 25], "free": [0.02, 0.82], "tail_seed": 1}`.
#[derive(Serialize, Deserialize)]
struct MicrostateRepr {
    measured: Vec<u8>,
    free: Vec<f64>,
    tail_seed: u64,
}

impl TryFrom<MicrostateRepr> for Microstate {
    type Error = Error;
    fn try_from(repr: MicrostateRepr) -> Result<Self> {
        let measured = repr
            .measured
            .into_iter()
            .map(DigitCode::new)
            .collect::<Result<Vec<_>>>()?;
        Microstate::from_parts(measured, repr.free, repr.tail_seed)
    }
}

impl From<Microstate> for MicrostateRepr {
    fn from(u: Microstate) -> Self {
        MicrostateRepr {
            measured: u.measured.iter().map(|c| c.value()).collect(),
            free: u.free.into_iter().collect(),
            tail_seed: u.tail_seed,
        }
    }
}

/// The coarse readout: the outcome stored in the most recent code, or None
/// when nothing has been measured yet.
pub fn macrostate(u: &Microstate) -> Option<Sign> {
    u.measured.last().map(|c| c.outcome())
}
