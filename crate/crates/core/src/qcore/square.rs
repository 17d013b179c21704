//! The nine two-qubit observables of the Mermin-Peres magic square.
//!
//! Layout, with the first tensor factor acting on qubit 1:
//!
//! ```text
//!   sx(x)1    1(x)sx    sx(x)sx
//!   1(x)sy    sy(x)1    sy(x)sy
//!   sx(x)sy   sy(x)sx   sz(x)sz
//! ```
//!
//! Operators within a row or column commute pairwise; every operator
//! anticommutes with the four outside its row and column. Each row product
//! and the first two column products equal +1; the third column product
//! equals -1. That sign mismatch is the whole point of the square.

use super::matrix::{c, ComplexMatrix4, Matrix2, MATRIX_TOL};
use crate::error::Error;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub fn pauli_i() -> Matrix2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn pauli_x() -> Matrix2 {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn pauli_y() -> Matrix2 {
    [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
}

/// sz|0> = +|0>.
pub fn pauli_z() -> Matrix2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
}

/// A grid position in the square; rows and columns run 1..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    row: u8,
    col: u8,
}

impl Cell {
    pub fn new(row: u8, col: u8) -> Result<Self, Error> {
        if (1..=3).contains(&row) && (1..=3).contains(&col) {
            Ok(Cell { row, col })
        } else {
            Err(Error::CellOutOfRange { row, col })
        }
    }

    pub fn row(self) -> u8 {
        self.row
    }

    pub fn col(self) -> u8 {
        self.col
    }

    /// Row-major index 0..=8.
    pub fn index(self) -> usize {
        usize::from(3 * (self.row - 1) + (self.col - 1))
    }

    /// All nine cells in row-major order.
    pub fn all() -> impl Iterator<Item = Cell> {
        (1..=3).flat_map(|row| (1..=3).map(move |col| Cell { row, col }))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.row, self.col)
    }
}

impl FromStr for Cell {
    type Err = Error;

    /// Parses the compact two-digit form used on the command line, e.g. "33".
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadCellSpec(s.to_string());
        let t = s.trim();
        if t.len() != 2 {
            return Err(bad());
        }
        let mut digits = t.chars().map(|ch| ch.to_digit(10));
        let row = digits.next().flatten().ok_or_else(bad)?;
        let col = digits.next().flatten().ok_or_else(bad)?;
        Cell::new(row as u8, col as u8).map_err(|_| bad())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One square observable: a Hermitian involution with eigenvalues {-1, +1},
/// each twice degenerate, tagged with its grid position.
#[derive(Clone, Debug)]
pub struct Observable {
    cell: Cell,
    matrix: ComplexMatrix4,
}

impl Observable {
    pub fn cell(&self) -> Cell {
        self.cell
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }
}

/// The square observable at (row, col). Errors only on an out-of-range index.
pub fn magic_square_operator(row: u8, col: u8) -> Result<Observable, Error> {
    Ok(operator_at(Cell::new(row, col)?))
}

/// Infallible lookup for an already-validated cell.
pub fn operator_at(cell: Cell) -> Observable {
    let (a, b) = match (cell.row(), cell.col()) {
        (1, 1) => (pauli_x(), pauli_i()),
        (1, 2) => (pauli_i(), pauli_x()),
        (1, 3) => (pauli_x(), pauli_x()),
        (2, 1) => (pauli_i(), pauli_y()),
        (2, 2) => (pauli_y(), pauli_i()),
        (2, 3) => (pauli_y(), pauli_y()),
        (3, 1) => (pauli_x(), pauli_y()),
        (3, 2) => (pauli_y(), pauli_x()),
        (3, 3) => (pauli_z(), pauli_z()),
        _ => unreachable!("cell constructor enforces the range"),
    };
    Observable {
        cell,
        matrix: ComplexMatrix4::kron(&a, &b),
    }
}

/// One named identity check with its worst-case entry deviation.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraCheck {
    pub name: String,
    pub deviation: f64,
    pub pass: bool,
}

impl AlgebraCheck {
    fn new(name: String, deviation: f64) -> Self {
        AlgebraCheck {
            pass: deviation <= MATRIX_TOL,
            name,
            deviation,
        }
    }
}

/// Results of checking the square's algebraic structure.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub checks: Vec<AlgebraCheck>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }
}

fn commutator_norm(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    (*a * *b - *b * *a).max_abs_diff(&ComplexMatrix4::zero())
}

fn anticommutator_norm(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    (*a * *b + *b * *a).max_abs_diff(&ComplexMatrix4::zero())
}

/// Checks every algebraic property the rest of the crate relies on:
/// hermiticity and involution of each operator, pairwise commutation within
/// each row and column, anticommutation across distinct rows and columns,
/// and the six line-product identities.
pub fn verify_square_algebra() -> AlgebraReport {
    let mut checks = Vec::new();
    let ops: Vec<Observable> = Cell::all().map(operator_at).collect();
    let identity = ComplexMatrix4::identity();

    for op in &ops {
        checks.push(AlgebraCheck::new(
            format!("hermitian {}", op.cell()),
            op.matrix().hermiticity_deviation(),
        ));
        checks.push(AlgebraCheck::new(
            format!("involution {}", op.cell()),
            (*op.matrix() * *op.matrix()).max_abs_diff(&identity),
        ));
    }

    for a in &ops {
        for b in &ops {
            if b.cell().index() <= a.cell().index() {
                continue;
            }
            let same_line = a.cell().row() == b.cell().row() || a.cell().col() == b.cell().col();
            if same_line {
                checks.push(AlgebraCheck::new(
                    format!("commute {} {}", a.cell(), b.cell()),
                    commutator_norm(a.matrix(), b.matrix()),
                ));
            } else {
                checks.push(AlgebraCheck::new(
                    format!("anticommute {} {}", a.cell(), b.cell()),
                    anticommutator_norm(a.matrix(), b.matrix()),
                ));
            }
        }
    }

    for row in 1..=3u8 {
        let product = (1..=3u8)
            .map(|col| *operator_at(Cell::new(row, col).unwrap()).matrix())
            .fold(identity, |acc, m| acc * m);
        checks.push(AlgebraCheck::new(
            format!("row {row} product = +1"),
            product.max_abs_diff(&identity),
        ));
    }
    for col in 1..=3u8 {
        let product = (1..=3u8)
            .map(|row| *operator_at(Cell::new(row, col).unwrap()).matrix())
            .fold(identity, |acc, m| acc * m);
        let (target, label) = if col == 3 {
            (-identity, format!("col {col} product = -1"))
        } else {
            (identity, format!("col {col} product = +1"))
        };
        checks.push(AlgebraCheck::new(label, product.max_abs_diff(&target)));
    }

    AlgebraReport { checks }
}
