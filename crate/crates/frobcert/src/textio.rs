//! Plain-text formats for matrices and systems.
//!
//! Matrix format: first line `rows cols`, then `rows` lines of `cols`
//! base-10 integers separated by single spaces. Lines starting with `#`
//! are comments. System files prepend one header line naming the form
//! (`canonical` or `standard`) and append one line with the right-hand
//! side (`rows` integers).

use crate::matrix::IntMatrix;
use crate::system::{CanonicalSystem, StandardSystem, SystemError};
use num_bigint::BigInt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

fn fail(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Content lines with their original 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_int_row(line_no: usize, line: &str, expected: usize) -> Result<Vec<BigInt>, ParseError> {
    let vals: Result<Vec<BigInt>, _> = line.split_whitespace().map(BigInt::from_str).collect();
    let vals = vals.map_err(|e| fail(line_no, format!("bad integer: {e}")))?;
    if vals.len() != expected {
        return Err(fail(
            line_no,
            format!("expected {expected} integers, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

fn parse_matrix_lines(lines: &[(usize, &str)]) -> Result<(IntMatrix, usize), ParseError> {
    let (head_no, head) = lines
        .first()
        .ok_or_else(|| ParseError::Truncated("missing dimension line".into()))?;
    let dims: Vec<&str> = head.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(fail(*head_no, "expected `rows cols`"));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| fail(*head_no, "bad row count"))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| fail(*head_no, "bad column count"))?;
    if rows == 0 || cols == 0 {
        return Err(fail(*head_no, "dimensions must be positive"));
    }
    if lines.len() < 1 + rows {
        return Err(ParseError::Truncated(format!(
            "matrix needs {rows} rows, found {}",
            lines.len() - 1
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (line_no, line) in &lines[1..=rows] {
        data.extend(parse_int_row(*line_no, line, cols)?);
    }
    Ok((IntMatrix::from_entries(rows, cols, data), 1 + rows))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    let lines = content_lines(text);
    let (m, used) = parse_matrix_lines(&lines)?;
    if used != lines.len() {
        return Err(fail(lines[used].0, "trailing content after matrix"));
    }
    Ok(m)
}

pub fn format_matrix(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A parsed system file before validation.
#[derive(Debug, Clone)]
pub enum SystemFile {
    Canonical(CanonicalSystem),
    Standard(StandardSystem),
}

pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    parse_system_with_cap(text, crate::delta::DEFAULT_MINOR_CAP)
}

pub fn parse_system_with_cap(text: &str, minor_cap: u64) -> Result<SystemFile, ParseError> {
    let lines = content_lines(text);
    let (head_no, head) = lines
        .first()
        .ok_or_else(|| ParseError::Truncated("missing form header".into()))?;
    let form = head.to_ascii_lowercase();
    if form != "canonical" && form != "standard" {
        return Err(fail(*head_no, "form header must be `canonical` or `standard`"));
    }
    let rest = &lines[1..];
    let (m, used) = parse_matrix_lines(rest)?;
    if rest.len() < used + 1 {
        return Err(ParseError::Truncated("missing right-hand side line".into()));
    }
    let (b_no, b_line) = rest[used];
    let b = parse_int_row(b_no, b_line, m.rows())?;
    if rest.len() > used + 1 {
        return Err(fail(rest[used + 1].0, "trailing content after right-hand side"));
    }
    if form == "canonical" {
        Ok(SystemFile::Canonical(CanonicalSystem::with_minor_cap(
            m, b, minor_cap,
        )?))
    } else {
        Ok(SystemFile::Standard(StandardSystem::with_minor_cap(
            m, b, minor_cap,
        )?))
    }
}

pub fn format_canonical(a: &IntMatrix, b: &[BigInt]) -> String {
    format_system("canonical", a, b)
}

pub fn format_standard(a: &IntMatrix, b: &[BigInt]) -> String {
    format_system("standard", a, b)
}

fn format_system(form: &str, a: &IntMatrix, b: &[BigInt]) -> String {
    let mut out = format!("{form}\n");
    out.push_str(&format_matrix(a));
    let row: Vec<String> = b.iter().map(|v| v.to_string()).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
    out
}
