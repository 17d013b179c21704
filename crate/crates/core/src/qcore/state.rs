//! Two-qubit density matrices and the named states used by the test rigs.

use super::matrix::{c, hermitian_eigenvalues, ComplexMatrix4, MATRIX_TOL};
use super::square::Observable;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Eigenvalues may dip slightly below zero from rounding; anything beyond
/// this is rejected as genuinely indefinite.
const PSD_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug)]
pub struct QuantumState {
    rho: ComplexMatrix4,
}

impl QuantumState {
    /// Validates and wraps a raw matrix. The error names the first violated
    /// property so that file loading failures are diagnosable.
    pub fn from_matrix(rho: ComplexMatrix4) -> Result<Self> {
        let dev = rho.hermiticity_deviation();
        if dev > MATRIX_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > MATRIX_TOL || trace.im.abs() > MATRIX_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eig = hermitian_eigenvalues(&rho)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(QuantumState { rho })
    }

    /// For matrices produced by operations that preserve validity.
    pub(crate) fn from_matrix_unchecked(rho: ComplexMatrix4) -> Self {
        QuantumState { rho }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.rho
    }

    /// <M> = Tr[rho M].
    pub fn expectation(&self, obs: &Observable) -> f64 {
        (self.rho * *obs.matrix()).trace().re
    }

    /// The two-qubit singlet, (|01> - |10>)/sqrt(2), as a density matrix.
    pub fn singlet() -> Self {
        let mut m = ComplexMatrix4::zero();
        let entries = [(1, 1, 0.5), (1, 2, -0.5), (2, 1, -0.5), (2, 2, 0.5)];
        for (i, j, v) in entries {
            m = set(m, i, j, c(v, 0.0));
        }
        QuantumState { rho: m }
    }

    /// (|00> + |11>)/sqrt(2): the path-spin entangled state of the
    /// single-neutron double-measurement setup, written in the z basis.
    pub fn huang_bell() -> Self {
        Self::from_ket_exact(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
    }

    /// (|10> - |01>)/sqrt(2): the spin-path state of the interferometric
    /// Bell-type setup. Equal to the singlet matrix up to global phase; the
    /// test suite confirms the matrices agree numerically.
    pub fn hasegawa_bell() -> Self {
        Self::from_ket_exact(&[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    /// I/4.
    pub fn maximally_mixed() -> Self {
        QuantumState {
            rho: ComplexMatrix4::identity().scale(c(0.25, 0.0)),
        }
    }

    fn from_ket_exact(unnormalized: &[Complex64; 4]) -> Self {
        let norm_sqr: f64 = unnormalized.iter().map(|a| a.norm_sqr()).sum();
        QuantumState {
            rho: ComplexMatrix4::outer(unnormalized).scale(c(1.0 / norm_sqr, 0.0)),
        }
    }

    /// Looks up one of the bundled states by name.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "singlet" => Ok(Self::singlet()),
            "huang-bell" => Ok(Self::huang_bell()),
            "hasegawa-bell" => Ok(Self::hasegawa_bell()),
            "mixed" => Ok(Self::maximally_mixed()),
            other => Err(Error::UnknownNamedState(other.to_string())),
        }
    }

    /// Haar-ish random pure state: four complex Gaussian amplitudes,
    /// normalized. Deterministic for a seeded generator.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut ket = [Complex64::default(); 4];
        for a in ket.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = c(re, im);
        }
        Self::from_ket_exact(&ket)
    }

    /// Parses the JSON state-file format: either `{"named": "singlet"}` or
    /// `{"matrix": [[[re, im], ...], ...]}` (four rows of four [re, im]
    /// pairs). Inline matrices go through full validation.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        match file {
            StateFile::Named { named } => Self::named(&named),
            StateFile::Matrix { matrix } => {
                let mut m = ComplexMatrix4::zero();
                for (i, row) in matrix.iter().enumerate() {
                    for (j, pair) in row.iter().enumerate() {
                        m = set(m, i, j, c(pair[0], pair[1]));
                    }
                }
                Self::from_matrix(m)
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Serializes to the inline-matrix form of the state-file format.
    pub fn to_json(&self) -> String {
        let matrix: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let e = self.rho.get(i, j);
                        [e.re, e.im]
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "matrix": matrix })).expect("plain data")
    }
}

fn set(mut m: ComplexMatrix4, i: usize, j: usize, v: Complex64) -> ComplexMatrix4 {
    let mut entries = *m.entries();
    entries[i][j] = v;
    m = ComplexMatrix4::from_entries(entries);
    m
}

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
#[allow(clippy::large_enum_variant)] // transient parse target, never stored
enum StateFile {
    Named { named: String },
    Matrix { matrix: [[[f64; 2]; 4]; 4] },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::magic_square_operator;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn named_states_are_valid_densities() {
        for name in ["singlet", "huang-bell", "hasegawa-bell", "mixed"] {
            let state = QuantumState::named(name).unwrap();
            QuantumState::from_matrix(*state.matrix()).unwrap();
        }
        assert!(QuantumState::named("bell").is_err());
    }

    #[test]
    fn hasegawa_state_matches_singlet_entrywise() {
        let a = QuantumState::hasegawa_bell();
        let b = QuantumState::singlet();
        assert!(a.matrix().max_abs_diff(b.matrix()) == 0.0);
    }

    #[test]
    fn singlet_correlations() {
        let state = QuantumState::singlet();
        // Perfect anticorrelation along each axis pair on the diagonal of
        // the square's third column, zero elsewhere.
        for (row, col, expect) in [
            (1u8, 3u8, -1.0),
            (2, 3, -1.0),
            (3, 3, -1.0),
            (1, 1, 0.0),
            (3, 1, 0.0),
            (3, 2, 0.0),
        ] {
            let obs = magic_square_operator(row, col).unwrap();
            assert!((state.expectation(&obs) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_invalid_matrices_with_named_reason() {
        // Not Hermitian.
        let mut entries = *QuantumState::maximally_mixed().matrix().entries();
        entries[0][1] = c(0.3, 0.0);
        match QuantumState::from_matrix(ComplexMatrix4::from_entries(entries)) {
            Err(Error::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }

        // Trace 2.
        let doubled = QuantumState::maximally_mixed().matrix().scale(c(2.0, 0.0));
        match QuantumState::from_matrix(doubled) {
            Err(Error::TraceNotOne { trace }) => assert!((trace - 2.0).abs() < 1e-12),
            other => panic!("expected TraceNotOne, got {other:?}"),
        }

        // Indefinite: diag(1.5, -0.5, 0, 0).
        let mut neg = *ComplexMatrix4::zero().entries();
        neg[0][0] = c(1.5, 0.0);
        neg[1][1] = c(-0.5, 0.0);
        match QuantumState::from_matrix(ComplexMatrix4::from_entries(neg)) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-9)
            }
            other => panic!("expected NotPositiveSemidefinite, got {other:?}"),
        }
    }

    #[test]
    fn json_forms_parse_and_validate() {
        let named = QuantumState::from_json(r#"{"named": "singlet"}"#).unwrap();
        assert!(
            named
                .matrix()
                .max_abs_diff(QuantumState::singlet().matrix())
                == 0.0
        );

        let inline = QuantumState::singlet().to_json();
        let reparsed = QuantumState::from_json(&inline).unwrap();
        assert!(
            reparsed
                .matrix()
                .max_abs_diff(QuantumState::singlet().matrix())
                < 1e-15
        );

        let bad = r#"{"matrix": [[[1.0,0],[0,0],[0,0],[0,0]],
                                 [[0,0],[0,0],[0,0],[0,0]],
                                 [[0,0],[0,0],[0,0],[0,0]],
                                 [[0,0],[0,0],[0,0],[1.0,0]]]}"#;
        match QuantumState::from_json(bad) {
            Err(Error::TraceNotOne { .. }) => {}
            other => panic!("expected TraceNotOne, got {other:?}"),
        }
    }

    #[test]
    fn random_pure_states_are_reproducible_and_valid() {
        let mut a = ChaCha12Rng::seed_from_u64(11);
        let mut b = ChaCha12Rng::seed_from_u64(11);
        let s1 = QuantumState::random_pure(&mut a);
        let s2 = QuantumState::random_pure(&mut b);
        assert!(s1.matrix().max_abs_diff(s2.matrix()) == 0.0);
        QuantumState::from_matrix(*s1.matrix()).unwrap();
        // Pure: rho^2 = rho.
        let sq = *s1.matrix() * *s1.matrix();
        assert!(sq.max_abs_diff(s1.matrix()) < 1e-12);
    }
}
