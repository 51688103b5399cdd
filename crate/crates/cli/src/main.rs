use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minnorm::emit::{emit_report, exit_code, OracleComparison, ReportFormat, EXIT_INPUT, EXIT_USAGE};
use minnorm::format::{parse_system, write_system};
use minnorm::generate::{generate, GeneratorSpec};
use minnorm::suite::run_paper_suite;
use minnorm_core::matrix::norm2;
use minnorm_core::oracle::{default_rank_tolerance, pinv_solve};
use minnorm_core::{solve, LineSearch, Method, SolverConfig};

#[derive(Parser)]
#[command(name = "minnorm", version, about = "Minimum-norm least-squares solutions of A x = b")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Relax,
    Cg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LineSearchArg {
    Parabolic,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the system stored in FILE.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "relax")]
        method: MethodArg,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_passes: Option<usize>,
        #[arg(long, value_enum, default_value = "parabolic")]
        line_search: LineSearchArg,
        #[arg(long, value_enum, default_value = "human")]
        format: ReportFormat,
        /// Also print the pseudoinverse solution and the distance to it.
        #[arg(long)]
        oracle: bool,
        /// Relative offset of the parabolic line-search probes.
        #[arg(long)]
        delta_scale: Option<f64>,
        /// Largest M for which A A^t is formed explicitly.
        #[arg(long)]
        gram_threshold: Option<usize>,
    },
    /// Run the built-in example systems and report pass/fail.
    PaperSuite,
    /// Write a random test system to stdout.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        rank: usize,
        /// Condition number of A A^t restricted to its range.
        #[arg(long)]
        cond: f64,
        #[arg(long)]
        seed: u64,
        /// Standard deviation of Gaussian noise added to b.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    ExitCode::from(run(cli.command) as u8)
}

fn run(command: Command) -> i32 {
    match command {
        Command::Solve {
            file,
            method,
            tol,
            max_passes,
            line_search,
            format,
            oracle,
            delta_scale,
            gram_threshold,
        } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return EXIT_INPUT;
                }
            };
            let system = match parse_system(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return EXIT_INPUT;
                }
            };
            let defaults = SolverConfig::default();
            let config = SolverConfig {
                method: match method {
                    MethodArg::Relax => Method::Relaxation,
                    MethodArg::Cg => Method::ConjugateGradient,
                },
                tolerance: tol.unwrap_or(defaults.tolerance),
                max_passes: max_passes.unwrap_or(defaults.max_passes),
                line_search: match line_search {
                    LineSearchArg::Parabolic => LineSearch::Parabolic,
                    LineSearchArg::Exact => LineSearch::Exact,
                },
                delta_scale: delta_scale.unwrap_or(defaults.delta_scale),
                gram_explicit_threshold: gram_threshold.unwrap_or(defaults.gram_explicit_threshold),
                ..defaults
            };
            let report = match solve(&system, &config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let comparison = if oracle {
                let tol = config
                    .rank_tolerance
                    .unwrap_or_else(|| default_rank_tolerance(system.rows()));
                match pinv_solve(&system, tol) {
                    Ok(x) => {
                        let diff: Vec<f64> = report.x.iter().zip(&x).map(|(a, b)| a - b).collect();
                        Some(OracleComparison {
                            deviation: norm2(&diff),
                            x,
                        })
                    }
                    Err(e) => {
                        eprintln!("error: oracle failed: {e}");
                        return EXIT_USAGE;
                    }
                }
            } else {
                None
            };
            print!("{}", emit_report(&report, format, comparison.as_ref()));
            exit_code(report.termination)
        }
        Command::PaperSuite => {
            let result = run_paper_suite();
            print!("{}", result.table());
            if result.all_passed() {
                0
            } else {
                1
            }
        }
        Command::Gen {
            rows,
            cols,
            rank,
            cond,
            seed,
            noise,
        } => {
            let spec = GeneratorSpec {
                rows,
                cols,
                rank,
                cond,
                seed,
                noise,
            };
            match generate(&spec) {
                Ok(g) => {
                    print!("{}", write_system(&g.system));
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
    }
}
