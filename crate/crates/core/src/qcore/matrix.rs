//! Dense 4x4 complex matrices.
//!
//! Everything in this crate lives on two qubits, so a fixed-size array type
//! with hand-rolled arithmetic is simpler and faster than a general linear
//! algebra dependency. The one nontrivial routine is a cyclic Jacobi
//! eigensolver for Hermitian matrices, used to validate density matrices.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Absolute tolerance for matrix identity checks.
pub const MATRIX_TOL: f64 = 1e-12;

/// A 2x2 complex matrix; building block for tensor products.
pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug)]
pub struct ComplexMatrix4 {
    entries: [[Complex64; 4]; 4],
}

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl ComplexMatrix4 {
    pub fn zero() -> Self {
        ComplexMatrix4 {
            entries: [[Complex64::default(); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(entries: [[Complex64; 4]; 4]) -> Self {
        ComplexMatrix4 { entries }
    }

    /// Tensor product of two single-qubit operators, first factor acting on
    /// the first qubit. Basis order is |00>, |01>, |10>, |11>.
    #[allow(clippy::needless_range_loop)] // index arithmetic mirrors the definition
    pub fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        let mut m = Self::zero();
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        m.entries[2 * i1 + i2][2 * j1 + j2] = a[i1][j1] * b[i2][j2];
                    }
                }
            }
        }
        m
    }

    /// Rank-one projector |psi><psi| (the ket is not normalized here).
    pub fn outer(ket: &[Complex64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut m = *self;
        for row in m.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= k;
            }
        }
        m
    }

    /// Largest entrywise absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from the adjoint; 0 for Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] += rhs.entries[i][j];
            }
        }
        m
    }
}

impl Sub for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] -= rhs.entries[i][j];
            }
        }
        m
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: Self) -> Self {
        let mut m = ComplexMatrix4::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.entries[i][k];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..4 {
                    m.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        m
    }
}

impl Neg for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn neg(self) -> Self {
        self.scale(c(-1.0, 0.0))
    }
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi sweeps with
/// complex rotations. Convergence for a 4x4 Hermitian matrix takes a handful
/// of sweeps; the off-diagonal mass is driven below ~1e-15.
#[allow(clippy::needless_range_loop)] // rotations touch rows p and q in lockstep
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> [f64; 4] {
    let mut a = *m.entries();
    for _ in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm_sqr())
            .sum();
        if off <= 1e-30 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let g = apq.norm();
                if g <= 1e-18 {
                    continue;
                }
                let phase = apq / g;
                let theta = 0.5 * (2.0 * g).atan2(a[q][q].re - a[p][p].re);
                let (s, cth) = theta.sin_cos();
                let sp = phase.scale(s);
                // Rows p and q of U A.
                for k in 0..4 {
                    let xp = a[p][k];
                    let xq = a[q][k];
                    a[p][k] = cth * xp - sp * xq;
                    a[q][k] = sp.conj() * xp + cth * xq;
                }
                // Columns p and q of (U A) U^H.
                for k in 0..4 {
                    let xp = a[k][p];
                    let xq = a[k][q];
                    a[k][p] = cth * xp - sp.conj() * xq;
                    a[k][q] = sp * xp + cth * xq;
                }
            }
        }
    }
    let mut eigs = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn diag(d: [f64; 4]) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zero();
        for (i, &value) in d.iter().enumerate() {
            m.entries[i][i] = c(value, 0.0);
        }
        m
    }

    #[test]
    fn kron_of_diagonals_is_diagonal() {
        let z: Matrix2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let zz = ComplexMatrix4::kron(&z, &z);
        let expected = diag([1.0, -1.0, -1.0, 1.0]);
        assert!(zz.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn trace_and_adjoint() {
        let mut m = ComplexMatrix4::zero();
        m.entries[0][1] = c(2.0, 3.0);
        m.entries[3][3] = c(1.0, -1.0);
        assert_eq!(m.trace(), c(1.0, -1.0));
        assert_eq!(m.adjoint().get(1, 0), c(2.0, -3.0));
        assert!(!m.is_hermitian(MATRIX_TOL));
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m = diag([0.5, -1.0, 2.0, 0.0]);
        let eigs = hermitian_eigenvalues(&m);
        assert_eq!(eigs, [-1.0, 0.0, 0.5, 2.0]);
    }

    #[test]
    fn eigenvalues_match_trace_moments_on_random_hermitian() {
        // The multiset of four real eigenvalues is pinned down by the first
        // four power sums, which equal Tr[M^k]; this checks the Jacobi
        // routine against an independent computation.
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut m = ComplexMatrix4::zero();
            for i in 0..4 {
                m.entries[i][i] = c(rng.gen_range(-1.0..1.0), 0.0);
                for j in (i + 1)..4 {
                    let e = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m.entries[i][j] = e;
                    m.entries[j][i] = e.conj();
                }
            }
            let eigs = hermitian_eigenvalues(&m);
            let mut pow = ComplexMatrix4::identity();
            for k in 1..=4 {
                pow = pow * m;
                let moment: f64 = eigs.iter().map(|l| l.powi(k)).sum();
                assert!(
                    (pow.trace().re - moment).abs() < 1e-9,
                    "moment {k} mismatch: {} vs {}",
                    pow.trace().re,
                    moment
                );
                assert!(pow.trace().im.abs() < 1e-9);
            }
        }
    }
}
