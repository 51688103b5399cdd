//! Solve reports as an aligned text table or a JSON object.

use std::fmt::Write as _;

use minnorm_core::{SolveReport, Termination};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::format::sig17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Human,
    Json,
}

/// Pseudoinverse answer appended by `solve --oracle`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub x: Vec<f64>,
    /// `|x_iter - x_oracle|_2`.
    pub deviation: f64,
}

/// A double written with 17 significant digits.
struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

fn sig17_vec(v: &[f64]) -> Vec<Sig17> {
    v.iter().copied().map(Sig17).collect()
}

#[derive(Serialize)]
struct BestWire {
    pass: usize,
    x: Vec<Sig17>,
    residual_norm: Sig17,
}

#[derive(Serialize)]
struct OracleWire {
    x: Vec<Sig17>,
    deviation: Sig17,
}

#[derive(Serialize)]
struct ReportWire {
    x: Vec<Sig17>,
    lambda: Vec<Sig17>,
    residual_norm: Sig17,
    solution_norm: Sig17,
    passes: usize,
    termination: &'static str,
    gradient_norm: Sig17,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_residual_x: Option<BestWire>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    inconsistent_rows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleWire>,
}

/// The JSON report read back.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportRecord {
    pub x: Vec<f64>,
    pub lambda: Vec<f64>,
    pub residual_norm: f64,
    pub solution_norm: f64,
    pub passes: usize,
    pub termination: String,
    pub gradient_norm: f64,
    #[serde(default)]
    pub best_residual_x: Option<BestRecord>,
    #[serde(default)]
    pub inconsistent_rows: Vec<usize>,
    #[serde(default)]
    pub oracle: Option<OracleRecord>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BestRecord {
    pub pass: usize,
    pub x: Vec<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct OracleRecord {
    pub x: Vec<f64>,
    pub deviation: f64,
}

pub fn report_json(report: &SolveReport, oracle: Option<&OracleComparison>) -> String {
    let wire = ReportWire {
        x: sig17_vec(&report.x),
        lambda: sig17_vec(&report.lambda),
        residual_norm: Sig17(report.residual_norm),
        solution_norm: Sig17(report.solution_norm),
        passes: report.passes,
        termination: report.termination.as_str(),
        gradient_norm: Sig17(report.gradient_norm),
        best_residual_x: report.best_residual.as_ref().map(|b| BestWire {
            pass: b.pass,
            x: sig17_vec(&b.x),
            residual_norm: Sig17(b.residual_norm),
        }),
        inconsistent_rows: report.inconsistent_rows.clone(),
        oracle: oracle.map(|o| OracleWire {
            x: sig17_vec(&o.x),
            deviation: Sig17(o.deviation),
        }),
    };
    serde_json::to_string_pretty(&wire).expect("report serialization cannot fail")
}

pub fn parse_report_json(text: &str) -> serde_json::Result<ReportRecord> {
    serde_json::from_str(text)
}

pub fn report_human(report: &SolveReport, oracle: Option<&OracleComparison>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<16}{}", "termination", report.termination);
    let _ = writeln!(out, "{:<16}{}", "passes", report.passes);
    let _ = writeln!(out, "{:<16}{:.6e}", "residual_norm", report.residual_norm);
    let _ = writeln!(out, "{:<16}{:.6e}", "solution_norm", report.solution_norm);
    let _ = writeln!(out, "{:<16}{:.6e}", "gradient_norm", report.gradient_norm);
    if !report.inconsistent_rows.is_empty() {
        let rows: Vec<String> = report.inconsistent_rows.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "{:<16}{}", "inconsistent", rows.join(", "));
    }
    out.push('\n');

    let best = report.best_residual.as_ref();
    let mut header = format!("{:>5}  {:>24}", "n", "x");
    if let Some(b) = best {
        let _ = write!(header, "  {:>24}", format!("best x (pass {})", b.pass));
    }
    if oracle.is_some() {
        let _ = write!(header, "  {:>24}", "oracle x");
    }
    let _ = writeln!(out, "{header}");
    for (n, xn) in report.x.iter().enumerate() {
        let mut line = format!("{n:>5}  {xn:>24.15e}");
        if let Some(b) = best {
            let _ = write!(line, "  {:>24.15e}", b.x[n]);
        }
        if let Some(o) = oracle {
            let _ = write!(line, "  {:>24.15e}", o.x[n]);
        }
        let _ = writeln!(out, "{line}");
    }
    if let Some(b) = best {
        let _ = writeln!(out, "\n{:<16}{:.6e}", "best_residual", b.residual_norm);
    }
    if let Some(o) = oracle {
        let _ = writeln!(out, "{:<16}{:.6e}", "oracle_dev", o.deviation);
    }
    out
}

pub fn emit_report(report: &SolveReport, format: ReportFormat, oracle: Option<&OracleComparison>) -> String {
    match format {
        ReportFormat::Human => report_human(report, oracle),
        ReportFormat::Json => report_json(report, oracle),
    }
}

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_MAX_PASSES: i32 = 2;
pub const EXIT_FLAT_DIRECTION: i32 = 3;
pub const EXIT_INCONSISTENT_ROW: i32 = 4;
pub const EXIT_USAGE: i32 = 64;
/// Unreadable or malformed input file.
pub const EXIT_INPUT: i32 = 65;

pub fn exit_code(termination: Termination) -> i32 {
    match termination {
        Termination::Converged => EXIT_CONVERGED,
        Termination::MaxPasses => EXIT_MAX_PASSES,
        Termination::FlatDirection => EXIT_FLAT_DIRECTION,
        Termination::InconsistentRow => EXIT_INCONSISTENT_ROW,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use minnorm_core::{solve, DenseMatrix, LinearSystem, SolverConfig};

    fn example_1a_report() -> SolveReport {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]).unwrap();
        let sys = LinearSystem::new(a, vec![2.0; 3]).unwrap();
        solve(&sys, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn json_has_required_keys() {
        let report = example_1a_report();
        let json = report_json(&report, None);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["x", "lambda", "residual_norm", "solution_norm", "passes", "termination", "gradient_norm"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["termination"], "Converged");
        let rec = parse_report_json(&json).unwrap();
        for xi in &rec.x {
            assert!((xi - 1.0).abs() < 1e-6);
        }
        assert!(json.contains("e0"), "17-digit scientific notation expected");
    }

    #[test]
    fn zero_rhs_report() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let sys = LinearSystem::new(a, vec![0.0; 2]).unwrap();
        let report = solve(&sys, &SolverConfig::default()).unwrap();
        let rec = parse_report_json(&report_json(&report, None)).unwrap();
        assert_eq!(rec.x, vec![0.0, 0.0]);
        assert!(rec.passes <= 1);
    }

    #[test]
    fn max_passes_report_carries_best_block() {
        let a = DenseMatrix::from_rows(&[[33.0, 16.0, 72.0], [-24.0, -10.0, -57.0], [18.0, -11.0, 7.0]]).unwrap();
        let sys = LinearSystem::new(a, vec![129.0, -96.0, 8.5]).unwrap();
        let cfg = SolverConfig { max_passes: 5, ..SolverConfig::default() };
        let report = solve(&sys, &cfg).unwrap();
        let json = report_json(&report, None);
        let rec = parse_report_json(&json).unwrap();
        assert_eq!(rec.termination, "MaxPasses");
        let best = rec.best_residual_x.unwrap();
        assert!(best.pass >= 1 && best.pass <= 5);
        assert_eq!(best.x.len(), 3);
    }

    #[test]
    fn human_table_lists_every_component() {
        let report = example_1a_report();
        let oracle = OracleComparison { x: vec![1.0; 3], deviation: 1e-12 };
        let text = report_human(&report, Some(&oracle));
        assert!(text.contains("termination     Converged"));
        assert!(text.contains("oracle x"));
        assert_eq!(text.lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit())).count(), 3);
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            exit_code(Termination::Converged),
            exit_code(Termination::MaxPasses),
            exit_code(Termination::FlatDirection),
            exit_code(Termination::InconsistentRow),
            EXIT_USAGE,
        ];
        assert_eq!(codes, [0, 2, 3, 4, 64]);
    }
}
