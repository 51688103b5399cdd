//! Dense row-major matrices, linear systems and the handful of vector
//! kernels the solvers are built from.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A real `rows x cols` matrix stored row-major.
///
/// Construction rejects empty dimensions and non-finite entries, so code
/// holding a `DenseMatrix` never has to re-check either.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        let expected = rows.checked_mul(cols).ok_or(Error::EmptyDimension { rows, cols })?;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected,
                found: entries.len(),
            });
        }
        check_finite("matrix entries", &entries)?;
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self::new(n, n, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry at `(row, col)`. Panics when out of range, like slice indexing.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = alloc::vec![0.0; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.entries)
    }

    /// Builds a matrix without validation; callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }
}

/// The problem instance `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: DenseMatrix,
    rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn new(matrix: DenseMatrix, rhs: Vec<f64>) -> Result<Self> {
        check_len("right-hand side", matrix.rows(), rhs.len())?;
        check_finite("right-hand side", &rhs)?;
        Ok(Self { matrix, rhs })
    }

    #[inline]
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    #[inline]
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Number of equations.
    #[inline]
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of unknowns.
    #[inline]
    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// `A x`.
pub fn matvec(a: &DenseMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_len("matvec operand", a.cols(), x.len())?;
    Ok((0..a.rows()).map(|m| dot(a.row(m), x)).collect())
}

/// `A^t y`.
pub fn matvec_transpose(a: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>> {
    check_len("transposed matvec operand", a.rows(), y.len())?;
    let mut out = alloc::vec![0.0; a.cols()];
    accumulate_transpose(a, y, &mut out);
    Ok(out)
}

/// `out += A^t y`, rows visited in ascending order.
pub(crate) fn accumulate_transpose(a: &DenseMatrix, y: &[f64], out: &mut [f64]) {
    for (m, &ym) in y.iter().enumerate() {
        if ym == 0.0 {
            continue;
        }
        axpy(ym, a.row(m), out);
    }
}

/// `A x - b`, evaluated as `(A x)_m - b_m` per component.
pub fn residual(system: &LinearSystem, x: &[f64]) -> Result<Vec<f64>> {
    let mut ax = matvec(system.matrix(), x)?;
    for (r, b) in ax.iter_mut().zip(system.rhs()) {
        *r -= b;
    }
    Ok(ax)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

/// Sum of absolute values.
#[inline]
pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

#[inline]
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// `y += alpha * x`
#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}

pub(crate) fn check_finite(what: &'static str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn example_1a() -> LinearSystem {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]).unwrap();
        LinearSystem::new(a, vec![2.0, 2.0, 2.0]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![1.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            DenseMatrix::new(0, 2, vec![]),
            Err(Error::EmptyDimension { .. })
        ));
        assert_eq!(
            DenseMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { what: "matrix entries", index: 1 })
        );
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        let a = DenseMatrix::identity(2).unwrap();
        assert!(LinearSystem::new(a.clone(), vec![1.0]).is_err());
        assert!(LinearSystem::new(a, vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn matvec_examples() {
        let id = DenseMatrix::identity(3).unwrap();
        assert_eq!(matvec(&id, &[2.0, 5.0, 7.0]).unwrap(), vec![2.0, 5.0, 7.0]);
        let sys = example_1a();
        assert_eq!(matvec(sys.matrix(), &[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 2.0, 2.0]);
        let row = DenseMatrix::from_rows(&[[3.0, 4.0]]).unwrap();
        assert_eq!(matvec(&row, &[1.0, 1.0]).unwrap(), vec![7.0]);
        assert!(matches!(
            matvec(&row, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matvec_transpose_examples() {
        let id = DenseMatrix::identity(3).unwrap();
        assert_eq!(matvec_transpose(&id, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let sys = example_1a();
        assert_eq!(
            matvec_transpose(sys.matrix(), &[1.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 1.0, 0.0]
        );
        assert_eq!(
            matvec_transpose(sys.matrix(), &[0.5, 0.5, 0.5]).unwrap(),
            vec![1.0, 1.0, 1.0]
        );
        assert!(matvec_transpose(sys.matrix(), &[1.0]).is_err());
    }

    #[test]
    fn residual_examples() {
        let sys = example_1a();
        assert_eq!(residual(&sys, &[1.0, 1.0, 1.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(residual(&sys, &[0.0; 3]).unwrap(), vec![-2.0; 3]);
        assert!(residual(&sys, &[0.0; 2]).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
        assert_eq!(norm2(&[0.0; 4]), 0.0);
        assert_eq!(norm1(&[0.0; 4]), 0.0);
        assert_eq!(norm1(&[-1.0, 2.0, -3.0]), 6.0);
        assert_eq!(norm_inf(&[-1.0, 2.0, -3.0]), 3.0);
    }

    #[test]
    fn transpose_swaps_indices() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let t = a.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        assert_eq!(t.get(2, 1), 6.0);
        assert_eq!(t.transpose(), a);
    }
}
