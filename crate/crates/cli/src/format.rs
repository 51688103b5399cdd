//! Plain-text system files.
//!
//! ```text
//! # comment
//! M N
//! a11 a12 ... a1N      (M coefficient lines)
//! ...
//! b1 b2 ... bM         (one line of M values, or M lines of one value)
//! ```
//!
//! `#` starts a comment anywhere on a line; blank lines are ignored.

use std::fmt::Write as _;

use minnorm_core::{DenseMatrix, LinearSystem};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based physical line number.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn logical_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let value: f64 = token
        .parse()
        .map_err(|_| ParseError::new(line, format!("malformed number `{token}`")))?;
    if !value.is_finite() {
        return Err(ParseError::new(line, format!("non-finite value `{token}`")));
    }
    Ok(value)
}

fn parse_count(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(ParseError::new(
            line,
            format!("{what} must be a positive integer, got `{token}`"),
        )),
    }
}

pub fn parse_system(text: &str) -> Result<LinearSystem, ParseError> {
    let lines = logical_lines(text);
    let end_line = text.lines().count() + 1;
    let mut iter = lines.iter();

    let header = iter
        .next()
        .ok_or_else(|| ParseError::new(end_line, "missing `M N` header"))?;
    if header.tokens.len() != 2 {
        return Err(ParseError::new(
            header.number,
            format!("header needs 2 values `M N`, found {}", header.tokens.len()),
        ));
    }
    let rows = parse_count(header.tokens[0], header.number, "M")?;
    let cols = parse_count(header.tokens[1], header.number, "N")?;

    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = iter.next().ok_or_else(|| {
            ParseError::new(end_line, format!("expected {rows} coefficient rows, found {r}"))
        })?;
        if line.tokens.len() != cols {
            return Err(ParseError::new(
                line.number,
                format!("expected {cols} coefficients, found {}", line.tokens.len()),
            ));
        }
        for t in &line.tokens {
            entries.push(parse_number(t, line.number)?);
        }
    }

    let rest: Vec<&Line<'_>> = iter.collect();
    let mut rhs = Vec::with_capacity(rows);
    match rest.first() {
        None => return Err(ParseError::new(end_line, "missing right-hand side")),
        Some(first) if first.tokens.len() == rows => {
            for t in &first.tokens {
                rhs.push(parse_number(t, first.number)?);
            }
            if let Some(extra) = rest.get(1) {
                return Err(ParseError::new(extra.number, "unexpected content after right-hand side"));
            }
        }
        Some(first) if first.tokens.len() == 1 => {
            for (i, line) in rest.iter().enumerate() {
                if i >= rows {
                    return Err(ParseError::new(line.number, "unexpected content after right-hand side"));
                }
                if line.tokens.len() != 1 {
                    return Err(ParseError::new(
                        line.number,
                        format!("expected 1 right-hand side value, found {}", line.tokens.len()),
                    ));
                }
                rhs.push(parse_number(line.tokens[0], line.number)?);
            }
            if rhs.len() != rows {
                return Err(ParseError::new(
                    end_line,
                    format!("expected {rows} right-hand side values, found {}", rhs.len()),
                ));
            }
        }
        Some(first) => {
            return Err(ParseError::new(
                first.number,
                format!(
                    "right-hand side needs {rows} values on one line or one value per line, found {}",
                    first.tokens.len()
                ),
            ))
        }
    }

    let matrix = DenseMatrix::new(rows, cols, entries).map_err(|e| ParseError::new(header.number, e.to_string()))?;
    LinearSystem::new(matrix, rhs).map_err(|e| ParseError::new(header.number, e.to_string()))
}

/// Formats `v` with 17 significant digits, enough to round-trip any finite
/// double.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `system` in the format read by [`parse_system`], right-hand side
/// on a single line.
pub fn write_system(system: &LinearSystem) -> String {
    let a = system.matrix();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for r in 0..a.rows() {
        let row: Vec<String> = a.row(r).iter().map(|&v| sig17(v)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    let rhs: Vec<String> = system.rhs().iter().map(|&v| sig17(v)).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example_1a() {
        let sys = parse_system("3 3\n1 1 0\n0 1 1\n1 0 1\n2 2 2").unwrap();
        assert_eq!(sys.matrix().entries(), &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0]);
        assert_eq!(sys.rhs(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn parses_scalar_system() {
        let sys = parse_system("1 1\n5\n10").unwrap();
        assert_eq!(sys.matrix().entries(), &[5.0]);
        assert_eq!(sys.rhs(), &[10.0]);
    }

    #[test]
    fn reports_line_of_malformed_number() {
        let err = parse_system("2 2\n1 0\n0 1\n1 abc").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("abc"));
    }

    #[test]
    fn comments_blank_lines_and_column_rhs() {
        let text = "# example 2\n\n3 3   # M N\n1 1 1\n1 1 1\n1 -1 0\n\n1.0\n1.0 # dup\n0\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.rhs(), &[1.0, 1.0, 0.0]);
        assert_eq!(sys.matrix().row(2), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(parse_system("").unwrap_err().line, 1);
        assert_eq!(parse_system("2\n").unwrap_err().line, 1);
        assert_eq!(parse_system("0 2\n").unwrap_err().line, 1);
        assert_eq!(parse_system("2 2\n1 0\n0\n1 1").unwrap_err().line, 3);
        assert_eq!(parse_system("2 2\n1 0\n0 1\n").unwrap_err().line, 4);
        assert_eq!(parse_system("2 2\n1 0\n0 1\n1 2 3").unwrap_err().line, 4);
        assert_eq!(parse_system("2 2\n1 0\n0 1\n1 2\n3").unwrap_err().line, 5);
        assert_eq!(parse_system("2 2\n1 0\n0 1\n1\n").unwrap_err().line, 5);
        assert_eq!(parse_system("1 1\ninf\n1").unwrap_err().line, 2);
        assert_eq!(parse_system("1 1\n1\n1e400").unwrap_err().line, 3);
    }

    #[test]
    fn writer_output_parses_back() {
        let sys = parse_system("2 3\n0.1 -2.5e-7 3\n1e300 0 -0\n0.3 7").unwrap();
        let text = write_system(&sys);
        assert_eq!(parse_system(&text).unwrap(), sys);
        assert!(text.starts_with("2 3\n"));
    }
}
