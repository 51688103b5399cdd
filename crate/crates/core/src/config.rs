use crate::error::{Error, Result};

/// Which iteration drives the multipliers to the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Coordinate-by-coordinate (Gauss-Seidel) relaxation.
    #[default]
    Relaxation,
    /// Fletcher-Reeves conjugate gradient.
    ConjugateGradient,
}

/// Step-length rule used by the conjugate-gradient solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineSearch {
    /// Vertex of the parabola through three equispaced samples of the
    /// minimized functional.
    #[default]
    Parabolic,
    /// Closed-form minimizer along the direction.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Termination threshold for the change sum and, for CG, the gradient norm.
    pub tolerance: f64,
    /// Sweep cap for relaxation, iteration cap for CG.
    pub max_passes: usize,
    pub line_search: LineSearch,
    /// Relative size of the parabolic trial offsets.
    pub delta_scale: f64,
    /// Largest equation count for which `A A^t` is formed explicitly.
    pub gram_explicit_threshold: usize,
    /// Relative eigenvalue cutoff for the pseudoinverse oracle; `None` means
    /// `1e-12 * M`.
    pub rank_tolerance: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Relaxation,
            tolerance: 1e-10,
            max_passes: 300_000,
            line_search: LineSearch::Parabolic,
            delta_scale: 1e-3,
            gram_explicit_threshold: 512,
            rank_tolerance: None,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig("tolerance must be positive and finite"));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be at least 1"));
        }
        if !(self.delta_scale > 0.0 && self.delta_scale.is_finite()) {
            return Err(Error::InvalidConfig("delta_scale must be positive and finite"));
        }
        if let Some(t) = self.rank_tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig("rank_tolerance must be positive and finite"));
            }
        }
        Ok(())
    }
}
