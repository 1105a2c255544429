//! Plain-text matrix files.
//!
//! ```text
//! # comment lines start with '#'
//! 2
//! 1.5        (0 -1)
//! (2.0,0.5)  -3
//! ```
//!
//! The first data line holds the dimension `n`, followed by `n` rows of `n`
//! whitespace-separated entries. An entry is a real number or a
//! parenthesized `re im` pair; a comma may separate the pair.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dense::ComplexMatrix;
use crate::error::{Error, Result};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token<'_>>> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let column = line[..start].chars().count() + 1;
        let end = if ch == '(' {
            match line[start..].find(')') {
                Some(off) => start + off + 1,
                None => return Err(parse_error(line_no, column, "unterminated '('")),
            }
        } else {
            line[start..]
                .find(|c: char| c.is_whitespace() || c == '(')
                .map_or(line.len(), |off| start + off)
        };
        tokens.push(Token {
            column,
            text: &line[start..end],
        });
        while chars.peek().is_some_and(|&(i, _)| i < end) {
            chars.next();
        }
    }
    Ok(tokens)
}

fn parse_real(text: &str, line: usize, column: usize) -> Result<f64> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| parse_error(line, column, format!("invalid number '{}'", text.trim())))?;
    if !value.is_finite() {
        return Err(parse_error(line, column, format!("non-finite number '{}'", text.trim())));
    }
    Ok(value)
}

fn parse_entry(tok: &Token<'_>, line: usize) -> Result<Complex64> {
    let Some(inner) = tok.text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) else {
        return parse_real(tok.text, line, tok.column).map(|re| Complex64::new(re, 0.0));
    };
    let parts: Vec<&str> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if parts.len() != 2 || inner.matches(',').count() > 1 {
        return Err(parse_error(
            line,
            tok.column,
            format!("expected '(re im)' pair, found '{}'", tok.text),
        ));
    }
    Ok(Complex64::new(
        parse_real(parts[0], line, tok.column)?,
        parse_real(parts[1], line, tok.column)?,
    ))
}

/// Parses a square matrix from text.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut dim: Option<usize> = None;
    let mut data = Vec::new();
    let mut rows_read = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = tokenize(line_no, raw)?;
        match dim {
            None => {
                let tok = &tokens[0];
                let n: usize = tok
                    .text
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| parse_error(line_no, tok.column, format!("expected positive dimension, found '{}'", tok.text)))?;
                if let Some(extra) = tokens.get(1) {
                    return Err(parse_error(line_no, extra.column, "unexpected token after dimension"));
                }
                dim = Some(n);
                data.reserve(n * n);
            }
            Some(n) => {
                if rows_read == n {
                    return Err(parse_error(line_no, tokens[0].column, format!("more than {n} data rows")));
                }
                if tokens.len() != n {
                    let column = tokens.get(n).map_or(raw.chars().count() + 1, |t| t.column);
                    return Err(parse_error(
                        line_no,
                        column,
                        format!("expected {n} entries, found {}", tokens.len()),
                    ));
                }
                for tok in &tokens {
                    data.push(parse_entry(tok, line_no)?);
                }
                rows_read += 1;
            }
        }
    }

    let n = dim.ok_or_else(|| parse_error(last_line.max(1), 1, "missing dimension header"))?;
    if rows_read != n {
        return Err(parse_error(
            last_line + 1,
            1,
            format!("expected {n} data rows, found {rows_read}"),
        ));
    }
    ComplexMatrix::new(n, n, data)
}

/// Renders `(re,im)` with 17 significant digits per component.
pub fn format_entry(z: Complex64) -> String {
    format!("({:.16e},{:.16e})", z.re, z.im)
}

/// Renders a square matrix in the file format, preceded by optional
/// comment lines.
pub fn format_matrix(m: &ComplexMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "{}", m.n_rows());
    for i in 0..m.n_rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_entry(z)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
