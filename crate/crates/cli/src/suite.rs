//! The built-in benchmark systems and their reference answers.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use minnorm_core::matrix::norm_inf;
use minnorm_core::oracle::{default_rank_tolerance, pinv_solve};
use minnorm_core::{
    solve, DenseMatrix, LinearSystem, Method, SolveReport, SolverConfig, Termination,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// Square, nonsingular, well conditioned.
    Determined,
    /// Square, nonsingular, `cond(A A^t)` about 1.8e3.
    DeterminedHard,
    /// Two identical equations plus one independent one.
    Degenerate,
    /// Four equations in three unknowns, nearly collinear columns.
    Overdetermined,
}

impl Example {
    pub const ALL: [Example; 4] = [
        Example::Determined,
        Example::DeterminedHard,
        Example::Degenerate,
        Example::Overdetermined,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Example::Determined => "1a",
            Example::DeterminedHard => "1b",
            Example::Degenerate => "2",
            Example::Overdetermined => "3",
        }
    }

    pub fn system(self) -> LinearSystem {
        let (rows, rhs): (&[&[f64]], &[f64]) = match self {
            Example::Determined => (
                &[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]],
                &[2.0, 2.0, 2.0],
            ),
            Example::DeterminedHard => (
                &[&[33.0, 16.0, 72.0], &[-24.0, -10.0, -57.0], &[18.0, -11.0, 7.0]],
                &[129.0, -96.0, 8.5],
            ),
            Example::Degenerate => (
                &[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, -1.0, 0.0]],
                &[1.0, 1.0, 0.0],
            ),
            Example::Overdetermined => (
                &[&[1.0, 2.0, 4.0], &[1.0, 4.0, 16.0], &[1.0, 6.0, 36.0], &[1.0, 8.0, 64.0]],
                &[4.999, 9.001, 12.999, 17.001],
            ),
        };
        let a = DenseMatrix::from_rows(rows).expect("static example");
        LinearSystem::new(a, rhs.to_vec()).expect("static example")
    }

    /// Reference solution. For the overdetermined system this is the
    /// published least-squares answer.
    pub fn reference(self) -> Vec<f64> {
        match self {
            Example::Determined => vec![1.0, 1.0, 1.0],
            Example::DeterminedHard => vec![1.0, 1.5, 1.0],
            Example::Degenerate => vec![1.0 / 3.0; 3],
            Example::Overdetermined => vec![0.998997, 2.000200, -2.8825692e-8],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSolver {
    Relaxation,
    ConjugateGradient,
    Oracle,
}

impl SuiteSolver {
    pub fn label(self) -> &'static str {
        match self {
            SuiteSolver::Relaxation => "relax",
            SuiteSolver::ConjugateGradient => "cg",
            SuiteSolver::Oracle => "oracle",
        }
    }
}

/// Pass/fail rule for one (example, solver) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    /// Bound on `|x - reference|_inf`.
    pub tolerance: f64,
    pub max_passes: Option<usize>,
    pub require_converged: bool,
    pub max_runtime: Option<Duration>,
}

pub fn expectation(example: Example, solver: SuiteSolver) -> Expectation {
    use SuiteSolver::*;
    let base = Expectation {
        tolerance: 0.0,
        max_passes: None,
        require_converged: false,
        max_runtime: None,
    };
    match (example, solver) {
        (Example::Determined, _) => Expectation {
            tolerance: 1e-6,
            max_runtime: Some(Duration::from_secs(1)),
            ..base
        },
        (Example::DeterminedHard, Relaxation) => Expectation {
            tolerance: 1e-5,
            max_passes: Some(50_000),
            ..base
        },
        (Example::DeterminedHard, ConjugateGradient) => Expectation {
            tolerance: 1e-3,
            max_passes: Some(50_000),
            ..base
        },
        (Example::DeterminedHard, Oracle) => Expectation { tolerance: 1e-6, ..base },
        (Example::Degenerate, Oracle) => Expectation { tolerance: 1e-4, ..base },
        (Example::Degenerate, _) => Expectation {
            tolerance: 1e-4,
            max_passes: Some(100),
            require_converged: true,
            ..base
        },
        (Example::Overdetermined, Oracle) => Expectation { tolerance: 1e-5, ..base },
        (Example::Overdetermined, _) => Expectation {
            tolerance: 1e-2,
            max_runtime: Some(Duration::from_secs(30)),
            ..base
        },
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub example: Example,
    pub solver: SuiteSolver,
    pub x: Vec<f64>,
    pub reference: Vec<f64>,
    pub deviation: f64,
    pub expectation: Expectation,
    /// `None` for the oracle.
    pub report: Option<SolveReport>,
    pub elapsed: Duration,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub rows: Vec<SuiteRow>,
}

impl SuiteResult {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn row(&self, example: Example, solver: SuiteSolver) -> Option<&SuiteRow> {
        self.rows.iter().find(|r| r.example == example && r.solver == solver)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<4} {:<7} {:>12} {:>10} {:>8} {:<15} {:>9}  result",
            "ex", "solver", "deviation", "tol", "passes", "termination", "time"
        );
        for r in &self.rows {
            let (passes, term) = match &r.report {
                Some(rep) => (rep.passes.to_string(), rep.termination.as_str()),
                None => ("-".to_string(), "-"),
            };
            let _ = writeln!(
                out,
                "{:<4} {:<7} {:>12.3e} {:>10.0e} {:>8} {:<15} {:>8.3}s  {}",
                r.example.label(),
                r.solver.label(),
                r.deviation,
                r.expectation.tolerance,
                passes,
                term,
                r.elapsed.as_secs_f64(),
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

fn deviation(x: &[f64], reference: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(reference).map(|(a, b)| a - b).collect();
    norm_inf(&d)
}

pub fn run_example(example: Example, solver: SuiteSolver, config: &SolverConfig) -> SuiteRow {
    let system = example.system();
    let reference = example.reference();
    let expectation = expectation(example, solver);
    let start = Instant::now();
    let (x, report) = match solver {
        SuiteSolver::Oracle => {
            let tol = config
                .rank_tolerance
                .unwrap_or_else(|| default_rank_tolerance(system.rows()));
            (pinv_solve(&system, tol).expect("oracle on static example"), None)
        }
        SuiteSolver::Relaxation | SuiteSolver::ConjugateGradient => {
            let method = if solver == SuiteSolver::Relaxation {
                Method::Relaxation
            } else {
                Method::ConjugateGradient
            };
            let cfg = SolverConfig { method, ..*config };
            let report = solve(&system, &cfg).expect("valid configuration");
            (report.x.clone(), Some(report))
        }
    };
    let elapsed = start.elapsed();
    let dev = deviation(&x, &reference);
    let mut passed = dev <= expectation.tolerance;
    if let Some(rep) = &report {
        if let Some(cap) = expectation.max_passes {
            passed &= rep.passes <= cap;
        }
        if expectation.require_converged {
            passed &= rep.termination == Termination::Converged;
        }
    }
    if let Some(limit) = expectation.max_runtime {
        passed &= elapsed < limit;
    }
    SuiteRow {
        example,
        solver,
        x,
        reference,
        deviation: dev,
        expectation,
        report,
        elapsed,
        passed,
    }
}

/// Runs both iterations and the oracle on every example with the default
/// configuration.
pub fn run_paper_suite() -> SuiteResult {
    run_suite_with(&SolverConfig::default())
}

pub fn run_suite_with(config: &SolverConfig) -> SuiteResult {
    let mut rows = Vec::new();
    for example in Example::ALL {
        for solver in [SuiteSolver::Relaxation, SuiteSolver::ConjugateGradient, SuiteSolver::Oracle] {
            rows.push(run_example(example, solver, config));
        }
    }
    SuiteResult { rows }
}
