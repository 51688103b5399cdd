//! Minimum-norm solutions of general real linear systems `A x = b`.
//!
//! The problem "minimize `|x|^2` subject to `A x = b`" is rewritten with
//! Lagrange multipliers as an unconstrained quadratic in `M` multipliers,
//! one per equation. Two iterations minimize it:
//!
//! * [`relaxation`]: coordinate-by-coordinate (Gauss-Seidel) sweeps,
//! * [`congrad`]: Fletcher-Reeves conjugate gradient with a three-point
//!   parabolic line search.
//!
//! The system may be square, under- or overdetermined, and may contain
//! linearly dependent equations; no preliminary analysis of `A` is needed.
//! [`oracle`] holds an independent pseudoinverse solver for verification.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
// `!(a > b)` is used on purpose so that NaN lands on the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod config;
pub mod congrad;
pub mod error;
pub mod lagrange;
pub mod matrix;
pub mod oracle;
pub mod relaxation;
pub mod report;

pub use config::{LineSearch, Method, SolverConfig};
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, LinearSystem};
pub use report::{BestResidual, Progress, SolveReport, Termination};

/// Solves with the method selected in `config`.
pub fn solve(system: &LinearSystem, config: &SolverConfig) -> Result<SolveReport> {
    match config.method {
        Method::Relaxation => relaxation::solve_relaxation(system, config),
        Method::ConjugateGradient => congrad::solve_cg(system, config),
    }
}

/// [`solve`] with a per-pass observer.
pub fn solve_observed(
    system: &LinearSystem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&Progress<'_>),
) -> Result<SolveReport> {
    match config.method {
        Method::Relaxation => relaxation::solve_relaxation_observed(system, config, observer),
        Method::ConjugateGradient => congrad::solve_cg_observed(system, config, observer),
    }
}
