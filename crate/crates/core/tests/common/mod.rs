#![allow(dead_code)]

use minnorm_core::matrix::{dot, matvec};
use minnorm_core::{DenseMatrix, LinearSystem};
use proptest::prelude::*;

/// Orthonormalizes the columns of a row-major `rows x cols` block
/// (modified Gram-Schmidt, two passes).
pub fn orthonormal_columns(rows: usize, cols: usize, raw: &[f64]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<f64> = (0..rows).map(|i| raw[i * cols + j]).collect();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let n = dot(&v, &v).sqrt();
        if n < 1e-8 {
            // degenerate draw: fall back to a unit vector not yet spanned
            v = (0..rows).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            for q in &basis {
                let c = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
            let n = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= n);
        } else {
            v.iter_mut().for_each(|x| *x /= n);
        }
        basis.push(v);
    }
    basis
}

/// `A = U diag(s) V^t` with rank `rank` and Gram condition number
/// `gram_cond` (singular values from 1 down to `gram_cond^-1/2`).
pub fn conditioned_matrix(
    rows: usize,
    cols: usize,
    rank: usize,
    gram_cond: f64,
    raw_u: &[f64],
    raw_v: &[f64],
) -> DenseMatrix {
    let u = orthonormal_columns(rows, rank, raw_u);
    let v = orthonormal_columns(cols, rank, raw_v);
    let mut entries = vec![0.0; rows * cols];
    for j in 0..rank {
        let s = if rank == 1 {
            1.0
        } else {
            gram_cond.sqrt().powf(-(j as f64) / (rank - 1) as f64)
        };
        for r in 0..rows {
            for c in 0..cols {
                entries[r * cols + c] += s * u[j][r] * v[j][c];
            }
        }
    }
    DenseMatrix::new(rows, cols, entries).unwrap()
}

pub fn consistent_system(a: DenseMatrix, x_true: &[f64]) -> LinearSystem {
    let b = matvec(&a, x_true).unwrap();
    LinearSystem::new(a, b).unwrap()
}

/// Dimensions plus uniform `[-1, 1]` entries for a matrix and two vectors.
pub fn dense_instance(max_dim: usize) -> impl Strategy<Value = (DenseMatrix, Vec<f64>, Vec<f64>)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-1.0f64..1.0, m * n),
            prop::collection::vec(-1.0f64..1.0, m),
            prop::collection::vec(-1.0f64..1.0, n),
        )
            .prop_map(move |(e, y, x)| (DenseMatrix::new(m, n, e).unwrap(), y, x))
    })
}

/// Raw material for [`conditioned_matrix`]: `(rows, cols, rank, raw_u, raw_v, extra)`.
pub fn factor_material(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (usize, usize, usize, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (rows, cols).prop_flat_map(|(m, n)| {
        let rmax = m.min(n);
        (1..=rmax).prop_flat_map(move |r| {
            (
                Just(m),
                Just(n),
                Just(r),
                prop::collection::vec(-1.0f64..1.0, m * r),
                prop::collection::vec(-1.0f64..1.0, n * r),
                prop::collection::vec(-1.0f64..1.0, n.max(m)),
            )
        })
    })
}
