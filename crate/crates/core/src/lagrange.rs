//! The Lagrange-multiplier form of the minimum-norm problem.
//!
//! Minimizing `|x|^2` subject to `A x = b` with multipliers `lambda` gives
//! `x = -0.5 A^t lambda` and leaves a quadratic in `lambda` alone, whose
//! curvature is the Gram operator `W = A A^t`.
//!
//! The solvers work on the scaled multipliers `mu = -lambda / 2`. In those
//! coordinates stationarity reads `W mu = b`, the solution is `x = A^t mu`,
//! and the function being minimized is the dual energy
//! `E(mu) = 0.5 <mu, W mu> - <mu, b>`, with `phi(lambda) = -2 E(mu)`.
//! Everything reported to callers is converted back to `lambda`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{self, check_finite, check_len, dot, DenseMatrix};

/// `W = A A^t`, either cached as an explicit `M x M` matrix or applied as
/// `A (A^t v)` on demand.
#[derive(Debug, Clone)]
pub struct GramOperator<'a> {
    source: &'a DenseMatrix,
    explicit: Option<DenseMatrix>,
    diagonal: Vec<f64>,
}

impl<'a> GramOperator<'a> {
    /// Caches the explicit matrix when `A` has at most `explicit_threshold`
    /// rows.
    pub fn new(source: &'a DenseMatrix, explicit_threshold: usize) -> Self {
        if source.rows() <= explicit_threshold {
            Self::explicit(source)
        } else {
            Self::implicit(source)
        }
    }

    pub fn explicit(source: &'a DenseMatrix) -> Self {
        let w = gram_matrix(source);
        let diagonal = (0..source.rows()).map(|k| w.get(k, k)).collect();
        Self {
            source,
            explicit: Some(w),
            diagonal,
        }
    }

    pub fn implicit(source: &'a DenseMatrix) -> Self {
        let diagonal = (0..source.rows())
            .map(|k| dot(source.row(k), source.row(k)))
            .collect();
        Self {
            source,
            explicit: None,
            diagonal,
        }
    }

    #[inline]
    pub fn source(&self) -> &'a DenseMatrix {
        self.source
    }

    #[inline]
    pub fn explicit_matrix(&self) -> Option<&DenseMatrix> {
        self.explicit.as_ref()
    }

    /// Number of multipliers `M`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.source.rows()
    }

    /// `w_kk`, the squared norm of row `k` of `A`.
    #[inline]
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `W v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        match &self.explicit {
            Some(w) => matrix::matvec(w, v),
            None => gram_apply(self.source, v),
        }
    }
}

/// Multipliers held by a running solve, stored as `mu = -lambda / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierState {
    pub mu: Vec<f64>,
    /// Completed sweeps or iterations.
    pub passes: usize,
}

impl MultiplierState {
    pub fn zeros(m: usize) -> Self {
        Self {
            mu: alloc::vec![0.0; m],
            passes: 0,
        }
    }

    pub fn from_lambda(lambda: &[f64]) -> Result<Self> {
        check_finite("multipliers", lambda)?;
        Ok(Self {
            mu: lambda_to_scaled(lambda),
            passes: 0,
        })
    }

    /// The multipliers in the unscaled convention, `lambda = -2 mu`.
    pub fn lambda(&self) -> Vec<f64> {
        scaled_to_lambda(&self.mu)
    }
}

#[inline]
pub fn scaled_to_lambda(mu: &[f64]) -> Vec<f64> {
    mu.iter().map(|m| -2.0 * m).collect()
}

#[inline]
pub fn lambda_to_scaled(lambda: &[f64]) -> Vec<f64> {
    lambda.iter().map(|l| -0.5 * l).collect()
}

/// `w_lm`, the dot product of rows `l` and `m` of `A`.
pub fn gram_entry(a: &DenseMatrix, l: usize, m: usize) -> Result<f64> {
    for index in [l, m] {
        if index >= a.rows() {
            return Err(Error::IndexOutOfRange {
                index,
                bound: a.rows(),
            });
        }
    }
    Ok(dot(a.row(l), a.row(m)))
}

/// `A A^t`, upper triangle computed and mirrored so the result is exactly
/// symmetric.
pub fn gram_matrix(a: &DenseMatrix) -> DenseMatrix {
    let m = a.rows();
    let mut w = alloc::vec![0.0; m * m];
    for l in 0..m {
        for k in l..m {
            let v = dot(a.row(l), a.row(k));
            w[l * m + k] = v;
            w[k * m + l] = v;
        }
    }
    DenseMatrix::from_parts_unchecked(m, m, w)
}

/// `A (A^t v)` without forming `W`.
pub fn gram_apply(a: &DenseMatrix, v: &[f64]) -> Result<Vec<f64>> {
    let t = matrix::matvec_transpose(a, v)?;
    matrix::matvec(a, &t)
}

/// `x_n = -0.5 * sum_m lambda_m a_mn`.
pub fn recover_x(a: &DenseMatrix, lambda: &[f64]) -> Result<Vec<f64>> {
    let mut x = matrix::matvec_transpose(a, lambda)?;
    for xn in &mut x {
        *xn *= -0.5;
    }
    Ok(x)
}

/// `phi(lambda) = -0.25 <lambda, W lambda> - <lambda, b>`.
pub fn phi(a: &DenseMatrix, b: &[f64], lambda: &[f64]) -> Result<f64> {
    check_len("right-hand side", a.rows(), b.len())?;
    let w_lambda = gram_apply(a, lambda)?;
    Ok(-0.25 * dot(lambda, &w_lambda) - dot(lambda, b))
}

/// Gradient of [`phi`]: `-0.5 W lambda - b`.
pub fn phi_gradient(a: &DenseMatrix, b: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
    check_len("right-hand side", a.rows(), b.len())?;
    let mut g = gram_apply(a, lambda)?;
    for (gm, bm) in g.iter_mut().zip(b) {
        *gm = -0.5 * *gm - bm;
    }
    Ok(g)
}

/// `E(mu) = 0.5 |A^t mu|^2 - <mu, b>`.
///
/// Evaluated through `x = A^t mu` rather than `<mu, W mu>`, which stays
/// accurate when `mu` drifts along the null space of `A^t`.
pub fn dual_energy(a: &DenseMatrix, b: &[f64], mu: &[f64]) -> Result<f64> {
    check_len("right-hand side", a.rows(), b.len())?;
    let x = matrix::matvec_transpose(a, mu)?;
    Ok(0.5 * dot(&x, &x) - dot(mu, b))
}

/// `W mu - b`, the gradient of [`dual_energy`]. Equal to [`phi_gradient`]
/// at `lambda = -2 mu`.
pub fn dual_gradient(gram: &GramOperator<'_>, b: &[f64], mu: &[f64]) -> Result<Vec<f64>> {
    check_len("right-hand side", gram.dim(), b.len())?;
    let mut g = gram.apply(mu)?;
    for (gm, bm) in g.iter_mut().zip(b) {
        *gm -= bm;
    }
    Ok(g)
}
