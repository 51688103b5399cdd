//! Coordinate relaxation of the multiplier functional.
//!
//! Each sweep minimizes the dual energy exactly in one multiplier at a time,
//! in ascending order, which on this quadratic is Gauss-Seidel applied to
//! `W mu = b`. Seen from `x = A^t mu` it is a cyclic row-projection method,
//! so duplicated or dependent equations are harmless, and inconsistent
//! systems settle into a cycle rather than converging.

use alloc::vec::Vec;

use crate::config::SolverConfig;
use crate::error::Result;
use crate::lagrange::{GramOperator, MultiplierState};
use crate::matrix::{self, check_len, norm2, LinearSystem};
use crate::report::{BestResidual, Progress, SolveReport, Termination};

/// Result of one full pass over the multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepStats {
    /// `sum_k |lambda_k^new - lambda_k^old|`.
    pub change_sum: f64,
    /// Zero rows whose right-hand side exceeds the tolerance. Their
    /// multipliers stay at zero.
    pub flagged_rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationOutcome {
    pub state: MultiplierState,
    pub change_sum: f64,
    pub termination: Termination,
    pub best_residual: Option<BestResidual>,
    pub flagged_rows: Vec<usize>,
}

/// One in-order Gauss-Seidel pass, updating `state.mu` in place.
///
/// `zero_row_tolerance` decides when a zero row with nonzero `b_k` is
/// flagged. `state.passes` is left alone.
pub fn relaxation_sweep(
    state: &mut MultiplierState,
    gram: &GramOperator<'_>,
    b: &[f64],
    zero_row_tolerance: f64,
) -> Result<SweepStats> {
    let m = gram.dim();
    check_len("multipliers", m, state.mu.len())?;
    check_len("right-hand side", m, b.len())?;

    let diag = gram.diagonal();
    let mu = &mut state.mu;
    let mut change = 0.0;
    let mut flagged_rows = Vec::new();

    match gram.explicit_matrix() {
        Some(w) => {
            for k in 0..m {
                let wkk = diag[k];
                if wkk == 0.0 {
                    if b[k].abs() > zero_row_tolerance {
                        flagged_rows.push(k);
                    }
                    continue;
                }
                let row = w.row(k);
                let mut off = 0.0;
                for (j, (&wkj, &muj)) in row.iter().zip(mu.iter()).enumerate() {
                    if j != k {
                        off += wkj * muj;
                    }
                }
                let updated = (b[k] - off) / wkk;
                change += (updated - mu[k]).abs();
                mu[k] = updated;
            }
        }
        None => {
            // Row-action form: keep x = A^t mu current, (W mu)_k = <a_k, x>.
            let a = gram.source();
            let mut x = matrix::matvec_transpose(a, mu)?;
            for k in 0..m {
                let wkk = diag[k];
                if wkk == 0.0 {
                    if b[k].abs() > zero_row_tolerance {
                        flagged_rows.push(k);
                    }
                    continue;
                }
                let row = a.row(k);
                let step = (b[k] - matrix::dot(row, &x)) / wkk;
                mu[k] += step;
                change += step.abs();
                matrix::axpy(step, row, &mut x);
            }
        }
    }

    Ok(SweepStats {
        change_sum: 2.0 * change,
        flagged_rows,
    })
}

/// Runs sweeps from `lambda = 0` until the change sum drops below the
/// tolerance or the pass cap is hit.
pub fn solve_relaxation(system: &LinearSystem, config: &SolverConfig) -> Result<SolveReport> {
    solve_relaxation_observed(system, config, &mut |_| {})
}

/// [`solve_relaxation`] with a callback after every sweep.
pub fn solve_relaxation_observed(
    system: &LinearSystem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&Progress<'_>),
) -> Result<SolveReport> {
    let outcome = relax(system, config, observer)?;
    SolveReport::assemble(
        system,
        &outcome.state.mu,
        outcome.state.passes,
        outcome.termination,
        outcome.best_residual,
        outcome.flagged_rows,
    )
}

/// The sweep loop behind [`solve_relaxation`], before the report is built.
pub fn relax(
    system: &LinearSystem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&Progress<'_>),
) -> Result<RelaxationOutcome> {
    config.validate()?;
    let a = system.matrix();
    let b = system.rhs();
    let gram = GramOperator::new(a, config.gram_explicit_threshold);
    let mut state = MultiplierState::zeros(system.rows());
    let mut best: Option<BestResidual> = None;

    let (termination, flagged_rows, change_sum) = loop {
        let stats = relaxation_sweep(&mut state, &gram, b, config.tolerance)?;
        state.passes += 1;
        let change_sum = stats.change_sum;

        let x = matrix::matvec_transpose(a, &state.mu)?;
        let r = norm2(&matrix::residual(system, &x)?);
        if best.as_ref().is_none_or(|bst| r < bst.residual_norm) {
            best = Some(BestResidual {
                pass: state.passes,
                x,
                residual_norm: r,
            });
        }

        observer(&Progress {
            pass: state.passes,
            mu: &state.mu,
            change_sum,
        });

        if change_sum < config.tolerance {
            break (Termination::Converged, stats.flagged_rows, change_sum);
        }
        if state.passes >= config.max_passes {
            break (Termination::MaxPasses, stats.flagged_rows, change_sum);
        }
    };

    let termination = if flagged_rows.is_empty() {
        termination
    } else {
        Termination::InconsistentRow
    };
    Ok(RelaxationOutcome {
        state,
        change_sum,
        termination,
        best_residual: best,
        flagged_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use alloc::vec;

    fn a1a() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]).unwrap()
    }

    #[test]
    fn one_sweep_from_zero_on_example_1a() {
        let a = a1a();
        for gram in [GramOperator::explicit(&a), GramOperator::implicit(&a)] {
            let mut state = MultiplierState::zeros(3);
            let stats = relaxation_sweep(&mut state, &gram, &[2.0; 3], 1e-10).unwrap();
            assert_eq!(state.mu, vec![1.0, 0.5, 0.25]);
            assert_eq!(stats.change_sum, 2.0 * 1.75);
            assert!(stats.flagged_rows.is_empty());
        }
    }

    #[test]
    fn zero_rhs_is_a_fixed_point() {
        let a = a1a();
        let gram = GramOperator::explicit(&a);
        let mut state = MultiplierState::zeros(3);
        let stats = relaxation_sweep(&mut state, &gram, &[0.0; 3], 1e-10).unwrap();
        assert_eq!(state.mu, vec![0.0; 3]);
        assert_eq!(stats.change_sum, 0.0);
    }

    #[test]
    fn identity_converges_in_one_sweep() {
        let a = DenseMatrix::identity(4).unwrap();
        let b = [1.5, -2.0, 0.0, 7.25];
        let gram = GramOperator::explicit(&a);
        let mut state = MultiplierState::zeros(4);
        relaxation_sweep(&mut state, &gram, &b, 1e-10).unwrap();
        assert_eq!(state.mu, b.to_vec());
    }

    #[test]
    fn dimension_errors() {
        let a = a1a();
        let gram = GramOperator::explicit(&a);
        let mut state = MultiplierState::zeros(2);
        assert!(relaxation_sweep(&mut state, &gram, &[0.0; 3], 1e-10).is_err());
        let mut state = MultiplierState::zeros(3);
        assert!(relaxation_sweep(&mut state, &gram, &[0.0; 2], 1e-10).is_err());
    }

    #[test]
    fn zero_row_is_frozen_and_flagged() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 2.0]]).unwrap();
        let gram = GramOperator::explicit(&a);
        let mut state = MultiplierState::zeros(3);
        let stats = relaxation_sweep(&mut state, &gram, &[1.0, 3.0, 4.0], 1e-10).unwrap();
        assert_eq!(state.mu, vec![1.0, 0.0, 1.0]);
        assert_eq!(stats.flagged_rows, vec![1]);

        let sys = LinearSystem::new(a.clone(), vec![1.0, 3.0, 4.0]).unwrap();
        let report = solve_relaxation(&sys, &SolverConfig::default()).unwrap();
        assert_eq!(report.termination, Termination::InconsistentRow);
        assert_eq!(report.inconsistent_rows, vec![1]);
        assert_eq!(report.x, vec![1.0, 2.0]);

        // zero row with zero rhs is simply skipped
        let sys = LinearSystem::new(a, vec![1.0, 0.0, 4.0]).unwrap();
        let report = solve_relaxation(&sys, &SolverConfig::default()).unwrap();
        assert_eq!(report.termination, Termination::Converged);
    }

    #[test]
    fn solves_example_1a() {
        let sys = LinearSystem::new(a1a(), vec![2.0; 3]).unwrap();
        let report = solve_relaxation(&sys, &SolverConfig::default()).unwrap();
        assert_eq!(report.termination, Termination::Converged);
        for xi in &report.x {
            assert!((xi - 1.0).abs() <= 1e-6);
        }
        for l in &report.lambda {
            assert!((l + 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn pass_cap_reports_max_passes() {
        let sys = LinearSystem::new(a1a(), vec![2.0; 3]).unwrap();
        let cfg = SolverConfig {
            max_passes: 2,
            ..SolverConfig::default()
        };
        let report = solve_relaxation(&sys, &cfg).unwrap();
        assert_eq!(report.termination, Termination::MaxPasses);
        assert_eq!(report.passes, 2);
        assert!(report.best_residual.is_some());
    }
}
