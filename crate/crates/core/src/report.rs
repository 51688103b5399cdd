use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::lagrange::{phi_gradient, recover_x, scaled_to_lambda};
use crate::matrix::{norm2, residual, LinearSystem};

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxPasses,
    /// The CG line search found no usable curvature, or its step would not
    /// decrease the functional.
    FlatDirection,
    /// An all-zero equation row has a nonzero right-hand side.
    InconsistentRow,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "Converged",
            Self::MaxPasses => "MaxPasses",
            Self::FlatDirection => "FlatDirection",
            Self::InconsistentRow => "InconsistentRow",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The iterate with the smallest residual norm seen during a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResidual {
    pub pass: usize,
    pub x: Vec<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `|A x - b|_2`, recomputed from `x`.
    pub residual_norm: f64,
    /// `|x|_2`.
    pub solution_norm: f64,
    pub passes: usize,
    pub termination: Termination,
    pub best_residual: Option<BestResidual>,
    /// `|grad phi(lambda)|_2` at the final multipliers.
    pub gradient_norm: f64,
    /// Zero rows of `A` whose right-hand side is nonzero.
    pub inconsistent_rows: Vec<usize>,
}

impl SolveReport {
    /// Derives every reported quantity from the final scaled multipliers.
    pub(crate) fn assemble(
        system: &LinearSystem,
        mu: &[f64],
        passes: usize,
        termination: Termination,
        best_residual: Option<BestResidual>,
        inconsistent_rows: Vec<usize>,
    ) -> Result<Self> {
        let a = system.matrix();
        let lambda = scaled_to_lambda(mu);
        let x = recover_x(a, &lambda)?;
        let residual_norm = norm2(&residual(system, &x)?);
        let solution_norm = norm2(&x);
        let gradient_norm = norm2(&phi_gradient(a, system.rhs(), &lambda)?);
        let termination = if inconsistent_rows.is_empty() {
            termination
        } else {
            Termination::InconsistentRow
        };
        Ok(Self {
            x,
            lambda,
            residual_norm,
            solution_norm,
            passes,
            termination,
            best_residual,
            gradient_norm,
            inconsistent_rows,
        })
    }
}

/// Snapshot handed to an observer after every sweep (relaxation) or
/// accepted step (CG).
#[derive(Debug, Clone, Copy)]
pub struct Progress<'a> {
    pub pass: usize,
    /// Scaled multipliers `mu = -lambda / 2`.
    pub mu: &'a [f64],
    /// Sum of absolute multiplier changes in the pass, in `lambda` units.
    pub change_sum: f64,
}
