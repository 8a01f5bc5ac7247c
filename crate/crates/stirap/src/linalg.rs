//! Dense symmetric matrices and a cyclic Jacobi eigensolver.
//!
//! The systems here are 4x4 or 5x5, far below the size where a general
//! linear-algebra dependency pays off. Jacobi rotations are unconditionally
//! stable on real symmetric input and give orthonormal eigenvectors to
//! machine precision, which the dark-state oracles rely on.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real symmetric matrix, stored dense row-major.
///
/// Symmetry is maintained by construction: the only mutator writes both
/// `(i, j)` and `(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Set the symmetric pair of entries `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let x = self.get(i, j);
                    acc += x * x;
                }
            }
        }
        acc.sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul_complex_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues are sorted ascending; `vectors[k]` is the unit eigenvector for
/// `values[k]`, with its first nonzero component made positive.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Diagonalize via cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm drops below 1e-12.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<Eigen> {
    let n = m.size();
    let mut a = m.clone();
    // v accumulates the rotations; columns end up as eigenvectors.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() < OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle that annihilates a[p][q].
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // A <- J^T A J with J the (p,q) plane rotation.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.data[k * n + p] = c * akp - s * akq;
                    a.data[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = c * apk - s * aqk;
                    a.data[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && a.off_diagonal_norm() >= OFF_DIAGONAL_TOL {
        return Err(Error::JacobiNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .partial_cmp(&a.get(j, j))
            .expect("eigenvalues are finite")
    });

    let values: Vec<f64> = order.iter().map(|&k| a.get(k, k)).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i * n + k]).collect();
            fix_sign(&mut col);
            col
        })
        .collect();

    Ok(Eigen { values, vectors })
}

/// Flip the vector so its first component with magnitude above 1e-12 is
/// positive.
pub fn fix_sign(v: &mut [f64]) {
    if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-12) {
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}
