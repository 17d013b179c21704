//! Counterfactual value tables and their parity combinatorics: line
//! membership, the exhaustive no-global-assignment check, and the
//! decomposability identities relating each square entry to the four basic
//! single-qubit variables v11, v12, v22, v21.

use crate::error::Error;
use crate::qcore::{Cell, Sign};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::ContextKind;

/// A complete +-1 assignment to the nine cells.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i8; 3]; 3]", into = "[[i8; 3]; 3]")]
pub struct ValueTable {
    values: [[Sign; 3]; 3],
}

impl ValueTable {
    pub fn new(values: [[Sign; 3]; 3]) -> Self {
        ValueTable { values }
    }

    pub fn from_fn(mut f: impl FnMut(Cell) -> Sign) -> Self {
        let mut values = [[Sign::Plus; 3]; 3];
        for cell in Cell::all() {
            values[usize::from(cell.row() - 1)][usize::from(cell.col() - 1)] = f(cell);
        }
        ValueTable { values }
    }

    pub fn get(&self, cell: Cell) -> Sign {
        self.values[usize::from(cell.row() - 1)][usize::from(cell.col() - 1)]
    }

    /// Product of the three entries on the given line.
    pub fn line_product(&self, line: ContextKind) -> Sign {
        Sign::product(line.cells().into_iter().map(|c| self.get(c)))
    }

    /// Whether the line's parity constraint holds (+1 products everywhere
    /// except column 3, which must give -1).
    pub fn satisfies(&self, line: ContextKind) -> bool {
        self.line_product(line) == line.required_parity()
    }

    pub fn membership(&self) -> ConstraintSet {
        let mut satisfied = [false; 6];
        for (slot, kind) in satisfied.iter_mut().zip(ContextKind::ALL) {
            *slot = self.satisfies(kind);
        }
        ConstraintSet { satisfied }
    }

    pub fn satisfied_count(&self) -> usize {
        self.membership().count()
    }

    /// All 512 assignments, in bit order (bit k flips the cell with index k).
    pub fn enumerate() -> impl Iterator<Item = ValueTable> {
        (0u16..512).map(|bits| {
            ValueTable::from_fn(|cell| {
                if bits >> cell.index() & 1 == 1 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
        })
    }
}

impl fmt::Debug for ValueTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.values {
            for v in row {
                write!(f, "{}", if *v == Sign::Plus { '+' } else { '-' })?;
            }
            write!(f, " ")?;
        }
        Ok(())
    }
}

impl TryFrom<[[i8; 3]; 3]> for ValueTable {
    type Error = Error;
    fn try_from(raw: [[i8; 3]; 3]) -> Result<Self, Error> {
        let mut values = [[Sign::Plus; 3]; 3];
        for (i, row) in raw.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                values[i][j] = Sign::from_i8(v)?;
            }
        }
        Ok(ValueTable { values })
    }
}

impl From<ValueTable> for [[i8; 3]; 3] {
    fn from(t: ValueTable) -> Self {
        t.values.map(|row| row.map(Sign::as_i8))
    }
}

/// Which of the six line constraints a table satisfies.
/// Serialized as six booleans in the order row1, row2, row3, col1, col2, col3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintSet {
    satisfied: [bool; 6],
}

impl ConstraintSet {
    pub fn contains(&self, kind: ContextKind) -> bool {
        self.satisfied[usize::from(kind.index() - 1)]
    }

    pub fn count(&self) -> usize {
        self.satisfied.iter().filter(|&&b| b).count()
    }

    pub fn all_six(&self) -> bool {
        self.count() == 6
    }

    pub fn iter(&self) -> impl Iterator<Item = (ContextKind, bool)> + '_ {
        ContextKind::ALL.into_iter().zip(self.satisfied)
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (kind, sat) in self.iter() {
            if sat {
                if any {
                    write!(f, " ")?;
                }
                write!(f, "{kind}")?;
                any = true;
            }
        }
        if !any {
            write!(f, "none")?;
        }
        Ok(())
    }
}

/// Result of enumerating all 512 value tables against the six constraints.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsReport {
    pub tables_checked: usize,
    /// Tables satisfying all six constraints. Zero: no global assignment.
    pub satisfy_all_six: usize,
    /// The largest number of constraints any one table satisfies.
    pub max_satisfied: usize,
    /// histogram[k] = number of tables satisfying exactly k constraints.
    pub satisfied_histogram: [usize; 7],
}

pub fn ks_exhaustive_check() -> KsReport {
    let mut histogram = [0usize; 7];
    for table in ValueTable::enumerate() {
        histogram[table.satisfied_count()] += 1;
    }
    let max_satisfied = (0..7).rev().find(|&k| histogram[k] > 0).unwrap_or(0);
    KsReport {
        tables_checked: 512,
        satisfy_all_six: histogram[6],
        max_satisfied,
        satisfied_histogram: histogram,
    }
}

/// One decomposability identity: does table membership in (or exclusion
/// from) a line force the stated product form?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionCase {
    /// The table satisfies this line's constraint.
    Within(ContextKind),
    /// The table violates this line's constraint but satisfies the other five.
    Excluded(ContextKind),
}

impl fmt::Display for DecompositionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionCase::Within(k) => write!(f, "in {k}"),
            DecompositionCase::Excluded(k) => write!(f, "outside {k}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCheck {
    pub case: DecompositionCase,
    /// Human-readable form of the identity, e.g. "v33 = -v11 v12 v22 v21".
    pub identity: String,
    pub hypothesis_met: bool,
    /// Evaluated only when the hypothesis holds.
    pub conclusion_holds: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub checks: Vec<DecompositionCheck>,
}

impl DecompositionReport {
    /// True when every identity whose hypothesis holds also has its
    /// conclusion hold.
    pub fn consistent(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !c.hypothesis_met || c.conclusion_holds == Some(true))
    }

    /// The identities actually applicable to this table.
    pub fn available(&self) -> impl Iterator<Item = &DecompositionCheck> {
        self.checks.iter().filter(|c| c.hypothesis_met)
    }
}

struct IdentityRow {
    line: ContextKind,
    target: (u8, u8),
    sign: Sign,
    factors: &'static [(u8, u8)],
}

/// Within-line identities: each line constraint rewrites one entry as the
/// (signed) product of the other two on the line.
const WITHIN: [IdentityRow; 6] = [
    IdentityRow {
        line: ContextKind::Row1,
        target: (1, 3),
        sign: Sign::Plus,
        factors: &[(1, 1), (1, 2)],
    },
    IdentityRow {
        line: ContextKind::Row2,
        target: (2, 3),
        sign: Sign::Plus,
        factors: &[(2, 2), (2, 1)],
    },
    IdentityRow {
        line: ContextKind::Row3,
        target: (3, 3),
        sign: Sign::Plus,
        factors: &[(3, 1), (3, 2)],
    },
    IdentityRow {
        line: ContextKind::Col1,
        target: (3, 1),
        sign: Sign::Plus,
        factors: &[(1, 1), (2, 1)],
    },
    IdentityRow {
        line: ContextKind::Col2,
        target: (3, 2),
        sign: Sign::Plus,
        factors: &[(1, 2), (2, 2)],
    },
    IdentityRow {
        line: ContextKind::Col3,
        target: (3, 3),
        sign: Sign::Minus,
        factors: &[(1, 3), (2, 3)],
    },
];

/// Exclusion identities: when a table violates exactly one line, the entry
/// that line would have constrained is still forced, with opposite sign, by
/// the five lines that do hold. All reduce to products of the four basic
/// variables v11, v12, v22, v21.
const EXCLUDED: [IdentityRow; 6] = [
    IdentityRow {
        line: ContextKind::Row1,
        target: (1, 3),
        sign: Sign::Minus,
        factors: &[(1, 1), (1, 2)],
    },
    IdentityRow {
        line: ContextKind::Row2,
        target: (2, 3),
        sign: Sign::Minus,
        factors: &[(2, 2), (2, 1)],
    },
    IdentityRow {
        line: ContextKind::Row3,
        target: (3, 3),
        sign: Sign::Minus,
        factors: &[(1, 1), (1, 2), (2, 2), (2, 1)],
    },
    IdentityRow {
        line: ContextKind::Col1,
        target: (3, 1),
        sign: Sign::Minus,
        factors: &[(1, 1), (2, 1)],
    },
    IdentityRow {
        line: ContextKind::Col2,
        target: (3, 2),
        sign: Sign::Minus,
        factors: &[(1, 2), (2, 2)],
    },
    IdentityRow {
        line: ContextKind::Col3,
        target: (3, 3),
        sign: Sign::Plus,
        factors: &[(1, 1), (2, 1), (1, 2), (2, 2)],
    },
];

impl IdentityRow {
    fn describe(&self) -> String {
        let mut s = format!(
            "v{}{} = {}",
            self.target.0,
            self.target.1,
            if self.sign == Sign::Minus { "-" } else { "" }
        );
        for (k, (i, j)) in self.factors.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&format!("v{i}{j}"));
        }
        s
    }

    fn conclusion(&self, table: &ValueTable) -> bool {
        let lhs = table.get(Cell::new(self.target.0, self.target.1).expect("static cell"));
        let rhs = Sign::product(
            self.factors
                .iter()
                .map(|&(i, j)| table.get(Cell::new(i, j).expect("static cell"))),
        );
        lhs == match self.sign {
            Sign::Minus => rhs.flipped(),
            Sign::Plus => rhs,
        }
    }
}

pub fn check_decomposition(table: &ValueTable) -> DecompositionReport {
    let membership = table.membership();
    let mut checks = Vec::with_capacity(12);
    for row in &WITHIN {
        let hypothesis_met = membership.contains(row.line);
        checks.push(DecompositionCheck {
            case: DecompositionCase::Within(row.line),
            identity: row.describe(),
            hypothesis_met,
            conclusion_holds: hypothesis_met.then(|| row.conclusion(table)),
        });
    }
    for row in &EXCLUDED {
        let hypothesis_met = !membership.contains(row.line)
            && ContextKind::ALL
                .into_iter()
                .filter(|&k| k != row.line)
                .all(|k| membership.contains(k));
        checks.push(DecompositionCheck {
            case: DecompositionCase::Excluded(row.line),
            identity: row.describe(),
            hypothesis_met,
            conclusion_holds: hypothesis_met.then(|| row.conclusion(table)),
        });
    }
    DecompositionReport { checks }
}
