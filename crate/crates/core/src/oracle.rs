//! Reference solver independent of both iterations: cyclic Jacobi
//! eigendecomposition of `W = A A^t` and the pseudoinverse solution
//! `x = A^t W^+ b`, which equals `A^+ b`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lagrange::gram_matrix;
use crate::matrix::{self, check_len, DenseMatrix, LinearSystem};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, eigenvalues descending. Column `j` of
/// `vectors` belongs to `values[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors.get(i, j)).collect()
    }
}

/// Cyclic Jacobi rotations until every off-diagonal entry is at most
/// `1e-12 * |W|_F`.
pub fn jacobi_eigen(w: &DenseMatrix) -> Result<EigenDecomposition> {
    let n = w.rows();
    check_len("square matrix columns", n, w.cols())?;
    let scale = w.entries().iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (w.get(i, j) - w.get(j, i)).abs();
            if gap > 1e-12 * scale {
                return Err(Error::Asymmetric { row: i, col: j, gap });
            }
        }
    }

    let mut a = w.entries().to_vec();
    let mut v = alloc::vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = 1e-12 * w.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off_max = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .fold(0.0_f64, |acc, (p, q)| acc.max(a[p * n + q].abs()));
        if off_max <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut a, &mut v, n, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = alloc::vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = v[row * n + src];
        }
    }
    Ok(EigenDecomposition {
        values,
        vectors: DenseMatrix::from_parts_unchecked(n, n, vectors),
    })
}

/// `A <- J^t A J` and `V <- V J` for the rotation in the `(p, q)` plane
/// that annihilates `a_pq`.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Relative eigenvalue cutoff used when none is configured.
pub fn default_rank_tolerance(rows: usize) -> f64 {
    1e-12 * rows as f64
}

/// Minimum-norm least-squares solution `A^+ b`.
///
/// Eigenvalues of `W` at or below `rank_tolerance * max_eigenvalue` are
/// treated as zero.
pub fn pinv_solve(system: &LinearSystem, rank_tolerance: f64) -> Result<Vec<f64>> {
    if !(rank_tolerance > 0.0 && rank_tolerance.is_finite()) {
        return Err(Error::InvalidConfig("rank_tolerance must be positive and finite"));
    }
    let a = system.matrix();
    let b = system.rhs();
    let eig = jacobi_eigen(&gram_matrix(a))?;
    let m = system.rows();
    let mut mu = alloc::vec![0.0; m];
    let largest = eig.values.first().copied().unwrap_or(0.0);
    if largest > 0.0 {
        let cutoff = rank_tolerance * largest;
        for (j, &value) in eig.values.iter().enumerate() {
            if value <= cutoff {
                continue;
            }
            let vj = eig.vector(j);
            let coeff = matrix::dot(&vj, b) / value;
            matrix::axpy(coeff, &vj, &mut mu);
        }
    }
    matrix::matvec_transpose(a, &mu)
}
