//! Plain-text matrix, decomposition and count files.
//!
//! Matrix files hold one row per line as comma-separated decimals, with no
//! header. Blank lines and lines starting with `#` are ignored. Decomposition
//! files hold one term per line as `weight; σ(0) σ(1) … σ(r-1)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bistochastic::birkhoff::{BirkhoffDecomposition, BirkhoffTerm, Permutation};
use bistochastic::{BistochasticMatrix, Matrix};

use crate::error::{CliError, Result};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number(path: &Path, line: usize, field: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| CliError::Parse {
        path: path.into(),
        line,
        message: format!("cannot parse `{}` as a number", field.trim()),
    })
}

pub fn parse_matrix(path: &Path, text: &str) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (line, l) in content_lines(text) {
        let row = l
            .split(',')
            .map(|f| parse_number(path, line, f))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(CliError::Parse {
                    path: path.into(),
                    line,
                    message: format!("row has {} entries, expected {first}", row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse {
            path: path.into(),
            line: 0,
            message: "no matrix rows".into(),
        });
    }
    Matrix::from_rows(&rows).map_err(|e| CliError::model(path.display().to_string(), e))
}

/// Reads a matrix without any stochasticity check.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    parse_matrix(path, &read_text(path)?)
}

/// Reads and validates a bistochastic matrix.
///
/// `gamma`, when given, allows the sums to exceed one by `size * gamma`, as
/// produced by ergodicization.
pub fn load_bistochastic(
    path: &Path,
    tolerance: f64,
    gamma: Option<f64>,
) -> Result<BistochasticMatrix> {
    let m = read_matrix(path)?;
    let slack = gamma.map_or(0.0, |g| g * m.rows() as f64);
    BistochasticMatrix::validate(m, tolerance, slack)
        .map_err(|e| CliError::model(path.display().to_string(), e))
}

/// One row per line; values use the shortest representation that reads back exactly.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for row in m.iter_rows() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix(m)).map_err(|e| CliError::io(path, e))
}

pub fn format_decomposition(d: &BirkhoffDecomposition) -> String {
    let mut out = String::new();
    for t in d.terms() {
        let images: Vec<String> = t
            .permutation
            .images()
            .iter()
            .map(usize::to_string)
            .collect();
        let _ = writeln!(out, "{:?}; {}", t.weight, images.join(" "));
    }
    out
}

pub fn parse_decomposition(path: &Path, text: &str) -> Result<BirkhoffDecomposition> {
    let parse_err = |line, message: String| CliError::Parse {
        path: path.into(),
        line,
        message,
    };
    let mut terms = Vec::new();
    let mut size = None;
    for (line, l) in content_lines(text) {
        let (weight, perm) = l
            .split_once(';')
            .ok_or_else(|| parse_err(line, "expected `weight; permutation`".into()))?;
        let weight = parse_number(path, line, weight)?;
        let images = perm
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(line, format!("bad index `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if *size.get_or_insert(images.len()) != images.len() {
            return Err(parse_err(
                line,
                "permutations have different lengths".into(),
            ));
        }
        let permutation =
            Permutation::from_images(images).map_err(|e| parse_err(line, e.to_string()))?;
        terms.push(BirkhoffTerm {
            weight,
            permutation,
        });
    }
    BirkhoffDecomposition::from_terms(size.unwrap_or(0), terms)
        .map_err(|e| CliError::model(path.display().to_string(), e))
}

/// Nonnegative counts separated by commas, whitespace or newlines.
pub fn read_counts(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let mut counts = Vec::new();
    for (line, l) in content_lines(&text) {
        for field in l
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
        {
            let v = parse_number(path, line, field)?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Parse {
                    path: path.into(),
                    line,
                    message: format!("count `{field}` must be a nonnegative number"),
                });
            }
            counts.push(v);
        }
    }
    Ok(counts)
}
