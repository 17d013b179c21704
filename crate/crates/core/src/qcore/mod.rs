//! Quantum oracle: matrices, observables, states, and measurement statistics.

mod matrix;
mod measure;
mod square;
mod state;

pub use matrix::{hermitian_eigenvalues, ComplexMatrix4, Matrix2, MATRIX_TOL};
pub use measure::{born_prob, joint_prob, luders_chain, luders_update, projector, ZERO_PROB_EPS};
pub use square::{
    magic_square_operator, operator_at, pauli_i, pauli_x, pauli_y, pauli_z, verify_square_algebra,
    AlgebraCheck, AlgebraReport, Cell, Observable,
};
pub use state::QuantumState;

use crate::error::Error;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A measurement outcome, +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i8())
    }

    pub fn from_i8(v: i8) -> Result<Self, Error> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            other => Err(Error::InvalidSign(other)),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    /// Product of a collection of signs; +1 for an empty product.
    pub fn product<I: IntoIterator<Item = Sign>>(signs: I) -> Sign {
        signs.into_iter().fold(
            Sign::Plus,
            |acc, s| if s == acc { Sign::Plus } else { Sign::Minus },
        )
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Minus => write!(f, "-1"),
            Sign::Plus => write!(f, "+1"),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(deserializer)?;
        Sign::from_i8(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_product_folds() {
        assert_eq!(Sign::product([]), Sign::Plus);
        assert_eq!(Sign::product([Sign::Minus, Sign::Minus]), Sign::Plus);
        assert_eq!(
            Sign::product([Sign::Minus, Sign::Plus, Sign::Minus, Sign::Minus]),
            Sign::Minus
        );
    }

    #[test]
    fn sign_roundtrips_through_i8() {
        assert_eq!(Sign::from_i8(-1).unwrap(), Sign::Minus);
        assert_eq!(Sign::from_i8(1).unwrap(), Sign::Plus);
        assert!(Sign::from_i8(0).is_err());
        assert_eq!(serde_json::to_string(&Sign::Plus).unwrap(), "1");
        assert_eq!(serde_json::from_str::<Sign>("-1").unwrap(), Sign::Minus);
    }
}
