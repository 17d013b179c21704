//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell ({row}, {col}) is out of range; rows and columns run 1..=3")]
    CellOutOfRange { row: u8, col: u8 },

    #[error("malformed cell spec {0:?}; expected two digits like \"33\"")]
    BadCellSpec(String),

    #[error("sign {0} is invalid; outcomes are -1 or +1")]
    InvalidSign(i8),

    #[error("matrix is not Hermitian (max |M - M^H| entry is {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace must be 1 (got {trace:.12})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("unknown named state {0:?}; expected singlet, huang-bell, hasegawa-bell or mixed")]
    UnknownNamedState(String),

    #[error("digit code {0} is unreachable; the leading base-3 digit must be 0 or 2")]
    UnreachableCode(u8),

    #[error("free coordinate {0} must lie strictly inside (0, 1) and off the 1/27 grid")]
    InvalidFreeCoordinate(f64),

    #[error("measurement history has zero probability at step {step} (cell {cell})")]
    ZeroProbabilityHistory { step: usize, cell: String },

    #[error("measurement plan is empty")]
    EmptyPlan,

    #[error("ordering must be a permutation of cells {expected}; got {got}")]
    OrderingMismatch { expected: String, got: String },

    #[error("unknown context {0:?}; expected row1..row3 or col1..col3")]
    UnknownContext(String),

    #[error("unknown experiment {0:?}; expected 1, 2, 3, 3c or 4")]
    UnknownExperiment(String),

    #[error("outcome tuples have mismatched arity ({left} vs {right})")]
    ArityMismatch { left: usize, right: usize },

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
