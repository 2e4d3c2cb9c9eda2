//! Text format for distance matrices.
//!
//! ```text
//! 4
//! a b c d
//! 0 1 3 6
//! 1 0 2 5
//! 3 2 0 3
//! 6 5 3 0
//! ```
//!
//! The first line is the number of points, the second the labels, then one
//! row of scalar literals per point. Blank lines and lines starting with `#`
//! are skipped. All `sqrt` terms must share one radicand, fixed by the first
//! one written unless given by the caller.

use std::fmt;

use subline_core::scalar::{parse_literal, Radicand, ScalarError};
use subline_core::{DistanceMatrix, MetricError, QuadScalar};

/// 1-based position of a parse error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (byte, ch) in line.char_indices() {
        col += 1;
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col)),
            (true, Some((b, c))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Parse a matrix file. `radicand` pins the field; otherwise it is inferred.
pub fn parse_matrix(text: &str, radicand: Option<Radicand>) -> Result<DistanceMatrix, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let last_line = text.lines().count().max(1);

    let (ln, header) = lines.next().ok_or_else(|| err(1, 1, "empty input, expected the number of points"))?;
    let n: usize = match tokens(header).as_slice() {
        [(col, tok)] => tok.parse().map_err(|_| err(ln, *col, format!("expected a point count, found {tok:?}")))?,
        [] => unreachable!("blank lines are skipped"),
        [_, (col, _), ..] => return Err(err(ln, *col, "unexpected token after the point count")),
    };

    let (ln, label_line) = lines.next().ok_or_else(|| err(last_line, 1, "missing label line"))?;
    let labels = tokens(label_line);
    if labels.len() != n {
        let col = labels.get(n).map_or(label_line.chars().count() + 1, |t| t.0);
        return Err(err(ln, col, format!("expected {n} labels, found {}", labels.len())));
    }
    let labels: Vec<String> = labels.into_iter().map(|(_, t)| t.to_string()).collect();

    let mut field: Option<(Radicand, usize, usize)> = radicand.map(|r| (r, 0, 0));
    let mut rows = Vec::with_capacity(n);
    for row in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(last_line, 1, format!("expected {n} matrix rows, found {row}")))?;
        let toks = tokens(line);
        if toks.len() != n {
            let col = toks.get(n).map_or(line.chars().count() + 1, |t| t.0);
            return Err(err(ln, col, format!("expected {n} entries, found {}", toks.len())));
        }
        let mut values = Vec::with_capacity(n);
        for (col, tok) in toks {
            let lit = parse_literal(tok).map_err(|e| scalar_error(e, ln, col))?;
            if let Some(r) = lit.written_radicand.filter(|r| !r.is_rational()) {
                match field {
                    None => field = Some((r, ln, col)),
                    Some((f, fl, fc)) if f != r => {
                        let origin = if fl == 0 { "--d".to_string() } else { format!("line {fl}, column {fc}") };
                        return Err(err(
                            ln,
                            col,
                            format!("mixed radicands: sqrt({}) here, sqrt({}) at {origin}", r.get(), f.get()),
                        ));
                    }
                    _ => {}
                }
            }
            values.push(lit.value);
        }
        rows.push(values);
    }
    if let Some((ln, line)) = lines.next() {
        let col = tokens(line).first().map_or(1, |t| t.0);
        return Err(err(ln, col, "unexpected content after the last matrix row"));
    }
    DistanceMatrix::new(labels, rows).map_err(|e| match e {
        MetricError::DuplicateLabel(l) => err(2, 1, format!("duplicate label {l:?}")),
        other => err(1, 1, other.to_string()),
    })
}

fn scalar_error(e: ScalarError, line: usize, token_col: usize) -> ParseError {
    match e {
        ScalarError::Syntax { column, message } => err(line, token_col + column - 1, message),
        other => err(line, token_col, other.to_string()),
    }
}

/// The inverse of [`parse_matrix`], with canonical literals.
pub fn write_matrix(m: &DistanceMatrix) -> String {
    let n = m.len();
    let mut out = format!("{n}\n{}\n", m.labels().join(" "));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Matrix of pairwise distances between labeled points on the line.
pub fn matrix_of_points(labels: Vec<String>, points: &[QuadScalar]) -> DistanceMatrix {
    DistanceMatrix::from_points(labels, points).expect("labels and points have equal length")
}
