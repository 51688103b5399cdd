//! Seeded random test systems with prescribed rank and conditioning.
//!
//! `A = U diag(s) V^t` where `U` (`M x R`) and `V` (`N x R`) have
//! orthonormal columns drawn from Gaussian factors, and the singular values
//! fall geometrically from 1 to `cond^-1/2`, so `cond` is the condition
//! number of `A A^t` on its range. The right-hand side is `A x` for a
//! Gaussian `x`, plus optional Gaussian noise, which makes rank-deficient
//! or overdetermined systems inconsistent.

use minnorm_core::matrix::{dot, matvec};
use minnorm_core::{DenseMatrix, LinearSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub cond: f64,
    pub seed: u64,
    /// Standard deviation of the noise added to `b`.
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("rows and cols must be positive")]
    EmptyDimension,
    #[error("rank {rank} must lie in 1..={max}")]
    BadRank { rank: usize, max: usize },
    #[error("cond must be finite and at least 1, got {0}")]
    BadCond(f64),
    #[error("noise must be finite and non-negative, got {0}")]
    BadNoise(f64),
}

/// A generated system with the data it was built from.
#[derive(Debug, Clone)]
pub struct GeneratedSystem {
    pub system: LinearSystem,
    pub singular_values: Vec<f64>,
    /// The noise-free solution used to form `b`.
    pub x_true: Vec<f64>,
}

fn gaussian_columns(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..cols)
        .map(|_| (0..rows).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

/// Modified Gram-Schmidt with reorthogonalization.
fn orthonormalize(mut columns: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for (j, mut v) in columns.drain(..).enumerate() {
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
        }
        let mut norm = dot(&v, &v).sqrt();
        if norm < 1e-10 {
            // measure-zero draw; use a coordinate vector instead
            v = (0..v.len()).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            for q in &basis {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
            norm = dot(&v, &v).sqrt();
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
}

pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedSystem, GeneratorError> {
    let GeneratorSpec {
        rows,
        cols,
        rank,
        cond,
        seed,
        noise,
    } = *spec;
    if rows == 0 || cols == 0 {
        return Err(GeneratorError::EmptyDimension);
    }
    let max = rows.min(cols);
    if rank == 0 || rank > max {
        return Err(GeneratorError::BadRank { rank, max });
    }
    if !(cond.is_finite() && cond >= 1.0) {
        return Err(GeneratorError::BadCond(cond));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(GeneratorError::BadNoise(noise));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = orthonormalize(gaussian_columns(&mut rng, rows, rank));
    let v = orthonormalize(gaussian_columns(&mut rng, cols, rank));
    let singular_values: Vec<f64> = (0..rank)
        .map(|j| {
            if rank == 1 {
                1.0
            } else {
                cond.sqrt().powf(-(j as f64) / (rank - 1) as f64)
            }
        })
        .collect();

    let mut entries = vec![0.0; rows * cols];
    for (j, &s) in singular_values.iter().enumerate() {
        for r in 0..rows {
            let su = s * u[j][r];
            for c in 0..cols {
                entries[r * cols + c] += su * v[j][c];
            }
        }
    }
    let matrix = DenseMatrix::new(rows, cols, entries).expect("finite by construction");

    let x_true: Vec<f64> = (0..cols).map(|_| rng.sample(StandardNormal)).collect();
    let mut rhs = matvec(&matrix, &x_true).expect("conforming dimensions");
    if noise > 0.0 {
        for b in &mut rhs {
            let e: f64 = rng.sample(StandardNormal);
            *b += noise * e;
        }
    }
    let system = LinearSystem::new(matrix, rhs).expect("finite by construction");
    Ok(GeneratedSystem {
        system,
        singular_values,
        x_true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use minnorm_core::lagrange::gram_matrix;
    use minnorm_core::oracle::jacobi_eigen;

    fn spec(rows: usize, cols: usize, rank: usize, cond: f64) -> GeneratorSpec {
        GeneratorSpec { rows, cols, rank, cond, seed: 7, noise: 0.0 }
    }

    #[test]
    fn same_seed_same_system() {
        let a = generate(&spec(5, 4, 3, 50.0)).unwrap();
        let b = generate(&spec(5, 4, 3, 50.0)).unwrap();
        assert_eq!(a.system, b.system);
        let c = generate(&GeneratorSpec { seed: 8, ..spec(5, 4, 3, 50.0) }).unwrap();
        assert_ne!(a.system, c.system);
    }

    #[test]
    fn gram_spectrum_matches_rank_and_cond() {
        let g = generate(&spec(6, 8, 4, 100.0)).unwrap();
        let eig = jacobi_eigen(&gram_matrix(g.system.matrix())).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[3] - 0.01).abs() < 1e-12);
        assert!(eig.values[4].abs() < 1e-12 && eig.values[5].abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(generate(&spec(0, 3, 1, 1.0)).unwrap_err(), GeneratorError::EmptyDimension);
        assert!(matches!(generate(&spec(3, 2, 3, 1.0)), Err(GeneratorError::BadRank { .. })));
        assert!(matches!(generate(&spec(3, 2, 0, 1.0)), Err(GeneratorError::BadRank { .. })));
        assert!(matches!(generate(&spec(3, 2, 1, 0.5)), Err(GeneratorError::BadCond(_))));
        assert!(matches!(
            generate(&GeneratorSpec { noise: -1.0, ..spec(3, 2, 1, 1.0) }),
            Err(GeneratorError::BadNoise(_))
        ));
    }

    #[test]
    fn noise_free_systems_are_consistent() {
        let g = generate(&spec(7, 3, 3, 10.0)).unwrap();
        let r = minnorm_core::matrix::residual(&g.system, &g.x_true).unwrap();
        assert!(minnorm_core::matrix::norm2(&r) < 1e-13);
    }
}
