//! Fletcher-Reeves conjugate gradient on the multiplier functional.
//!
//! The search runs in scaled multipliers `mu` on the dual energy
//! `E(mu) = 0.5 <mu, W mu> - <mu, b>`, whose gradient `W mu - b` coincides
//! with the gradient of `phi` at `lambda = -2 mu`. Each cycle is one
//! steepest-descent step followed by `M` conjugate updates, so directions
//! restart every `M + 1` iterations.

use alloc::vec::Vec;

use crate::config::{LineSearch, SolverConfig};
use crate::error::{Error, Result};
use crate::lagrange::{dual_energy, dual_gradient, GramOperator};
use crate::matrix::{self, check_len, dot, norm2, LinearSystem};
use crate::report::{BestResidual, Progress, SolveReport, Termination};

/// Curvature below `FLAT_CURVATURE * (1 + |E|)` is indistinguishable from
/// roundoff.
const FLAT_CURVATURE: f64 = 1e-12;

/// Iteration state of the conjugate-gradient solver.
#[derive(Debug, Clone, PartialEq)]
pub struct CGState {
    /// Scaled multipliers `mu = -lambda / 2`.
    pub mu: Vec<f64>,
    /// Gradient at `mu`.
    pub gradient: Vec<f64>,
    /// Current search direction.
    pub direction: Vec<f64>,
    /// Squared norm of the gradient that produced `direction`.
    pub grad_norm_sq_prev: f64,
    pub iteration: usize,
}

/// `|grad_new|^2 / |grad_old|^2`.
pub fn fr_beta(grad_new: &[f64], grad_old: &[f64]) -> Result<f64> {
    check_len("gradient", grad_old.len(), grad_new.len())?;
    let old = dot(grad_old, grad_old);
    if old <= 0.0 {
        return Err(Error::ZeroGradient);
    }
    Ok(dot(grad_new, grad_new) / old)
}

/// `-grad` on a restart, `-grad + beta * prev` otherwise.
pub fn direction_update(grad: &[f64], prev_direction: Option<&[f64]>, beta: f64) -> Result<Vec<f64>> {
    match prev_direction {
        None => Ok(grad.iter().map(|g| -g).collect()),
        Some(prev) => {
            check_len("previous direction", grad.len(), prev.len())?;
            Ok(grad.iter().zip(prev).map(|(g, d)| -g + beta * d).collect())
        }
    }
}

/// Step to the vertex of the parabola through `(-delta, phi_minus)`,
/// `(0, phi_center)` and `(delta, phi_plus)`.
///
/// The result is a multiple of the direction: the new point is
/// `current + step * d`. Fails with [`Error::FlatDirection`] when the
/// curvature is too small to trust or has the wrong sign for a minimum.
pub fn parabolic_step(phi_minus: f64, phi_center: f64, phi_plus: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig("parabolic offset must be positive"));
    }
    let curvature = phi_minus - 2.0 * phi_center + phi_plus;
    if !(curvature > FLAT_CURVATURE * (1.0 + phi_center.abs())) {
        return Err(Error::FlatDirection { curvature });
    }
    Ok((phi_minus - phi_plus) * delta / (2.0 * curvature))
}

/// Runs Fletcher-Reeves CG from `lambda = 0`.
pub fn solve_cg(system: &LinearSystem, config: &SolverConfig) -> Result<SolveReport> {
    solve_cg_observed(system, config, &mut |_| {})
}

/// [`solve_cg`] with a callback after every accepted step.
pub fn solve_cg_observed(
    system: &LinearSystem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&Progress<'_>),
) -> Result<SolveReport> {
    config.validate()?;
    let a = system.matrix();
    let b = system.rhs();
    let m = system.rows();
    let gram = GramOperator::new(a, config.gram_explicit_threshold);

    // Zero rows of A have no curvature; their multipliers stay at zero.
    let frozen: Vec<bool> = gram.diagonal().iter().map(|&w| w == 0.0).collect();
    let inconsistent_rows: Vec<usize> = (0..m)
        .filter(|&k| frozen[k] && b[k].abs() > config.tolerance)
        .collect();

    let mut state = CGState {
        mu: alloc::vec![0.0; m],
        gradient: alloc::vec![0.0; m],
        direction: alloc::vec![0.0; m],
        grad_norm_sq_prev: 0.0,
        iteration: 0,
    };
    let mut best: Option<BestResidual> = None;

    let termination = loop {
        state.gradient = dual_gradient(&gram, b, &state.mu)?;
        for (g, &f) in state.gradient.iter_mut().zip(&frozen) {
            if f {
                *g = 0.0;
            }
        }
        let grad_sq = dot(&state.gradient, &state.gradient);
        if libm::sqrt(grad_sq) < config.tolerance {
            break Termination::Converged;
        }
        if state.iteration >= config.max_passes {
            break Termination::MaxPasses;
        }

        let restart = state.iteration.is_multiple_of(m + 1) || state.grad_norm_sq_prev <= 0.0;
        let mut direction = if restart {
            direction_update(&state.gradient, None, 0.0)?
        } else {
            let beta = grad_sq / state.grad_norm_sq_prev;
            direction_update(&state.gradient, Some(&state.direction), beta)?
        };
        let mut steepest = restart;
        if !steepest && dot(&state.gradient, &direction) >= 0.0 {
            // not a descent direction after an inexact line search
            direction = direction_update(&state.gradient, None, 0.0)?;
            steepest = true;
        }
        state.grad_norm_sq_prev = grad_sq;

        let energy = dual_energy(a, b, &state.mu)?;
        // A flat conjugate direction gets one retry as steepest descent;
        // only a flat gradient direction ends the run.
        let accepted = loop {
            state.direction = direction;
            let found = match line_search(&gram, b, &state, energy, config) {
                Ok(step) => {
                    let mut candidate = state.mu.clone();
                    matrix::axpy(step, &state.direction, &mut candidate);
                    let new_energy = dual_energy(a, b, &candidate)?;
                    (new_energy <= energy + FLAT_CURVATURE * (1.0 + energy.abs())).then_some((step, candidate))
                }
                Err(Error::FlatDirection { .. }) => None,
                Err(e) => return Err(e),
            };
            if found.is_some() || steepest {
                break found;
            }
            direction = direction_update(&state.gradient, None, 0.0)?;
            steepest = true;
        };
        let Some((step, candidate)) = accepted else {
            break Termination::FlatDirection;
        };

        let change_sum: f64 = 2.0 * state.direction.iter().map(|d| (step * d).abs()).sum::<f64>();
        state.mu = candidate;
        state.iteration += 1;

        let x = matrix::matvec_transpose(a, &state.mu)?;
        let r = norm2(&matrix::residual(system, &x)?);
        if best.as_ref().is_none_or(|bst| r < bst.residual_norm) {
            best = Some(BestResidual {
                pass: state.iteration,
                x,
                residual_norm: r,
            });
        }
        observer(&Progress {
            pass: state.iteration,
            mu: &state.mu,
            change_sum,
        });

        if change_sum < config.tolerance {
            break Termination::Converged;
        }
    };

    SolveReport::assemble(system, &state.mu, state.iteration, termination, best, inconsistent_rows)
}

/// Step length along `state.direction` in `mu` units.
fn line_search(
    gram: &GramOperator<'_>,
    b: &[f64],
    state: &CGState,
    energy: f64,
    config: &SolverConfig,
) -> Result<f64> {
    let d = &state.direction;
    let delta = config.delta_scale * (1.0 + norm2(&state.mu)) / norm2(d);
    match config.line_search {
        LineSearch::Parabolic => {
            let a = gram.source();
            let mut probe = state.mu.clone();
            matrix::axpy(-delta, d, &mut probe);
            let minus = dual_energy(a, b, &probe)?;
            probe.copy_from_slice(&state.mu);
            matrix::axpy(delta, d, &mut probe);
            let plus = dual_energy(a, b, &probe)?;
            parabolic_step(minus, energy, plus, delta)
        }
        LineSearch::Exact => {
            let wd = gram.apply(d)?;
            let curvature = dot(d, &wd);
            if !(delta * delta * curvature > FLAT_CURVATURE * (1.0 + energy.abs())) {
                return Err(Error::FlatDirection { curvature });
            }
            Ok(-dot(&state.gradient, d) / curvature)
        }
    }
}
