//! Measurement contexts: the six row/column families of mutually commuting
//! observables, simultaneous-measurement maps over microstates,
//! counterfactual value tables, and the parity-constraint combinatorics
//! behind the no-global-assignment argument.
//!
//! A simultaneous measurement of one line is modeled as the composition of
//! the three per-cell measurement maps in a declared ordering. The default
//! orderings walk each line from its third cell back to its first; any
//! permutation defines an equivalent-in-law variant and can be selected
//! explicitly.

mod tables;

pub use tables::{
    check_decomposition, ks_exhaustive_check, ConstraintSet, DecompositionCase, DecompositionCheck,
    DecompositionReport, KsReport, ValueTable,
};

use crate::error::{Error, Result};
use crate::hvmodel::{Microstate, SequentialModel, Trajectory};
use crate::qcore::{Cell, QuantumState, Sign};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// One of the six lines of the square, doubling as the context index 1..=6
/// (rows first, then columns).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContextKind {
    Row1,
    Row2,
    Row3,
    Col1,
    Col2,
    Col3,
}

impl ContextKind {
    pub const ALL: [ContextKind; 6] = [
        ContextKind::Row1,
        ContextKind::Row2,
        ContextKind::Row3,
        ContextKind::Col1,
        ContextKind::Col2,
        ContextKind::Col3,
    ];

    pub fn index(self) -> u8 {
        match self {
            ContextKind::Row1 => 1,
            ContextKind::Row2 => 2,
            ContextKind::Row3 => 3,
            ContextKind::Col1 => 4,
            ContextKind::Col2 => 5,
            ContextKind::Col3 => 6,
        }
    }

    pub fn from_index(n: u8) -> Result<Self> {
        ContextKind::ALL
            .into_iter()
            .find(|k| k.index() == n)
            .ok_or_else(|| Error::UnknownContext(n.to_string()))
    }

    /// The line's three cells in grid order (left to right, top to bottom).
    pub fn cells(self) -> [Cell; 3] {
        let cell = |r, c| Cell::new(r, c).expect("line indices are in range");
        match self {
            ContextKind::Row1 => [cell(1, 1), cell(1, 2), cell(1, 3)],
            ContextKind::Row2 => [cell(2, 1), cell(2, 2), cell(2, 3)],
            ContextKind::Row3 => [cell(3, 1), cell(3, 2), cell(3, 3)],
            ContextKind::Col1 => [cell(1, 1), cell(2, 1), cell(3, 1)],
            ContextKind::Col2 => [cell(1, 2), cell(2, 2), cell(3, 2)],
            ContextKind::Col3 => [cell(1, 3), cell(2, 3), cell(3, 3)],
        }
    }

    /// Default measurement ordering: third cell of the line first.
    pub fn default_ordering(self) -> [Cell; 3] {
        let [a, b, c] = self.cells();
        [c, b, a]
    }

    /// The sign the line's outcome product must equal: -1 for column 3,
    /// +1 for every other line.
    pub fn required_parity(self) -> Sign {
        match self {
            ContextKind::Col3 => Sign::Minus,
            _ => Sign::Plus,
        }
    }

    pub fn is_row(self) -> bool {
        self.index() <= 3
    }
}

impl fmt::Display for ContextKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (word, n) = if self.is_row() {
            ("row", self.index())
        } else {
            ("col", self.index() - 3)
        };
        write!(f, "{word}{n}")
    }
}

impl FromStr for ContextKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "row1" | "r1" => ContextKind::Row1,
            "row2" | "r2" => ContextKind::Row2,
            "row3" | "r3" => ContextKind::Row3,
            "col1" | "c1" => ContextKind::Col1,
            "col2" | "c2" => ContextKind::Col2,
            "col3" | "c3" => ContextKind::Col3,
            _ => return Err(Error::UnknownContext(s.to_string())),
        };
        Ok(kind)
    }
}

impl Serialize for ContextKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ContextKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A context plus the order in which its three cells are measured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ContextRepr", into = "ContextRepr")]
pub struct Context {
    kind: ContextKind,
    ordering: [Cell; 3],
}

impl Context {
    pub fn canonical(kind: ContextKind) -> Self {
        Context {
            kind,
            ordering: kind.default_ordering(),
        }
    }

    /// A context measured in an explicit order; the order must be a
    /// permutation of the line's cells.
    pub fn with_ordering(kind: ContextKind, ordering: [Cell; 3]) -> Result<Self> {
        let mut sorted = ordering;
        sorted.sort();
        if sorted != kind.cells() {
            return Err(Error::OrderingMismatch {
                expected: format!("permutation of {}", join_cells(&kind.cells())),
                got: join_cells(&ordering),
            });
        }
        Ok(Context { kind, ordering })
    }

    /// Parses an ordering spec: "paper" selects the default ordering;
    /// otherwise a comma-separated cell list such as "31,32,33", applied
    /// left to right.
    pub fn parse_order(kind: ContextKind, spec: &str) -> Result<Self> {
        if spec.trim().eq_ignore_ascii_case("paper") {
            return Ok(Context::canonical(kind));
        }
        let cells: Vec<Cell> = spec
            .split(',')
            .map(|tok| tok.trim().parse())
            .collect::<Result<_>>()?;
        let ordering: [Cell; 3] =
            cells
                .try_into()
                .map_err(|v: Vec<Cell>| Error::OrderingMismatch {
                    expected: "exactly three cells".to_string(),
                    got: join_cells(&v),
                })?;
        Context::with_ordering(kind, ordering)
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    pub fn ordering(&self) -> &[Cell; 3] {
        &self.ordering
    }

    pub fn is_default_ordering(&self) -> bool {
        self.ordering == self.kind.default_ordering()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, join_cells(&self.ordering))
    }
}

fn join_cells(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize, Deserialize)]
struct ContextRepr {
    kind: ContextKind,
    ordering: Vec<Cell>,
}

impl TryFrom<ContextRepr> for Context {
    type Error = Error;
    fn try_from(repr: ContextRepr) -> Result<Self> {
        let ordering: [Cell; 3] =
            repr.ordering
                .clone()
                .try_into()
                .map_err(|_| Error::OrderingMismatch {
                    expected: "exactly three cells".to_string(),
                    got: join_cells(&repr.ordering),
                })?;
        Context::with_ordering(repr.kind, ordering)
    }
}

impl From<Context> for ContextRepr {
    fn from(ctx: Context) -> Self {
        ContextRepr {
            kind: ctx.kind,
            ordering: ctx.ordering.to_vec(),
        }
    }
}

/// Measures the context's three cells in its declared order.
pub fn apply_context(
    model: &mut SequentialModel,
    u: &Microstate,
    ctx: &Context,
) -> Result<(Trajectory, Microstate)> {
    model.run(u, ctx.ordering())
}

/// One-shot variant of [`apply_context`].
pub fn apply_context_once(
    state: &QuantumState,
    u: &Microstate,
    ctx: &Context,
) -> Result<(Trajectory, Microstate)> {
    apply_context(&mut SequentialModel::new(state), u, ctx)
}

/// The nine counterfactual next-measurement outcomes, all probed from the
/// same microstate. This realizes the reading under which each cell has a
/// definite value for every microstate: the value measuring it next would
/// reveal.
pub fn value_table(model: &mut SequentialModel, u: &Microstate) -> Result<ValueTable> {
    let mut values = [[Sign::Plus; 3]; 3];
    for cell in Cell::all() {
        values[usize::from(cell.row() - 1)][usize::from(cell.col() - 1)] =
            model.counterfactual(u, cell)?;
    }
    Ok(ValueTable::new(values))
}

/// The value already recorded for `cell`, if it has been measured
/// (most recent record wins).
pub fn recorded_value(u: &Microstate, cell: Cell) -> Option<Sign> {
    u.measured()
        .iter()
        .rev()
        .find(|code| code.cell() == cell)
        .map(|code| code.outcome())
}

/// Constraint membership judged only from values actually recorded in the
/// microstate: `Some(sat)` when all three cells of the line have been
/// measured, `None` otherwise. The alternative to the counterfactual
/// reading of [`value_table`]; indexed in [`ContextKind::ALL`] order.
pub fn recorded_membership(u: &Microstate) -> [Option<bool>; 6] {
    let mut out = [None; 6];
    for (slot, kind) in out.iter_mut().zip(ContextKind::ALL) {
        let recorded: Vec<Sign> = kind
            .cells()
            .iter()
            .filter_map(|&c| recorded_value(u, c))
            .collect();
        if recorded.len() == 3 {
            *slot = Some(Sign::product(recorded) == kind.required_parity());
        }
    }
    out
}
