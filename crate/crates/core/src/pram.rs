//! Applying bistochastic matrices to data, and inverting them.
//!
//! Categorical records are resampled row by row (randomized response applied
//! by the data holder, i.e. PRAM): a record in category `u` is reported as `v`
//! with probability `p_uv`. Numerical columns treat the `N` individuals as the
//! categories and support three modes, see [`ColumnMode`].
//!
//! Multi-column anonymization derives one ChaCha stream per column from the
//! master seed ([`column_stream`]), so columns can be processed in any order
//! or in parallel with identical results.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::birkhoff::{self, BirkhoffDecomposition};
use crate::dataset::{AttributeColumn, Dataset};
use crate::entropy::PrivacyReport;
use crate::error::{ColumnError, ColumnErrors};
use crate::linalg;
use crate::matrix::{BistochasticMatrix, Distribution, Matrix};
use crate::{Error, Result};

/// Largest joint domain accepted by [`joint_randomize`].
pub const JOINT_SIZE_CAP: usize = 4096;
/// Row-sum tolerance for transition matrices given to [`estimate_frequencies`].
const STOCHASTIC_TOLERANCE: f64 = 1e-6;

/// How a column is pushed through its matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnMode {
    /// Each record independently draws its reported category (or, for
    /// numerical data, the individual whose value it reports) from its row.
    Sample,
    /// Numerical only: deterministic `y = Pᵀx`, a mean-preserving smoothing.
    Linear,
    /// Numerical only: draw one permutation from the Birkhoff decomposition
    /// and reorder the values with it.
    Permute,
}

impl ColumnMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnMode::Sample => "sample",
            ColumnMode::Linear => "linear",
            ColumnMode::Permute => "permute",
        }
    }
}

impl fmt::Display for ColumnMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ColumnMode {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "sample" => Ok(ColumnMode::Sample),
            "linear" => Ok(ColumnMode::Linear),
            "permute" => Ok(ColumnMode::Permute),
            other => Err(format!(
                "unknown mode `{other}` (expected sample, linear or permute)"
            )),
        }
    }
}

fn require_strict(m: &BistochasticMatrix) -> Result<()> {
    if m.is_strict() {
        Ok(())
    } else {
        Err(Error::NotStrictlyBistochastic(m.super_slack()))
    }
}

fn require_size(m: &BistochasticMatrix, expected: usize) -> Result<()> {
    if m.size() == expected {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            expected,
            found: m.size(),
        })
    }
}

fn row_samplers(m: &BistochasticMatrix) -> Vec<WeightedIndex<f64>> {
    m.entries()
        .iter_rows()
        .map(|row| WeightedIndex::new(row).expect("bistochastic rows have positive mass"))
        .collect()
}

/// Resamples every record of a categorical column through the rows of `m`.
pub fn randomize_categorical<R: Rng + ?Sized>(
    col: &AttributeColumn,
    m: &BistochasticMatrix,
    rng: &mut R,
) -> Result<AttributeColumn> {
    let codes = col
        .codes()
        .ok_or_else(|| Error::NonCategoricalColumn(col.name().into()))?;
    require_strict(m)?;
    require_size(m, col.domain_size())?;
    let rows = row_samplers(m);
    let out = codes.iter().map(|&u| rows[u].sample(rng)).collect();
    Ok(col.with_codes(out))
}

/// Randomized response over individuals: record `i` reports `x_v` with `v`
/// drawn from row `i`.
pub fn sample_numeric<R: Rng + ?Sized>(
    col: &AttributeColumn,
    m: &BistochasticMatrix,
    rng: &mut R,
) -> Result<AttributeColumn> {
    let x = numeric_values(col)?;
    require_strict(m)?;
    require_size(m, x.len())?;
    let rows = row_samplers(m);
    let y = rows.iter().map(|row| x[row.sample(rng)]).collect();
    Ok(col.with_values(y))
}

fn numeric_values(col: &AttributeColumn) -> Result<&[f64]> {
    col.values().ok_or_else(|| Error::ModeNotApplicable {
        column: col.name().into(),
        mode: "numerical transform",
    })
}

/// Deterministic `y = Pᵀx`. Column sums of one make this mean-preserving.
pub fn transform_numeric_linear(
    col: &AttributeColumn,
    m: &BistochasticMatrix,
) -> Result<AttributeColumn> {
    let x = numeric_values(col)?;
    require_strict(m)?;
    require_size(m, x.len())?;
    Ok(col.with_values(m.entries().transpose_mul_vec(x)))
}

/// Decomposes `m`, draws one permutation `σ` and returns `y_i = x_σ⁻¹(i)`.
pub fn transform_numeric_permute<R: Rng + ?Sized>(
    col: &AttributeColumn,
    m: &BistochasticMatrix,
    rng: &mut R,
) -> Result<AttributeColumn> {
    let x = numeric_values(col)?;
    require_size(m, x.len())?;
    let d = birkhoff::decompose(m, birkhoff::DEFAULT_ZERO_THRESHOLD)?;
    permute_numeric_with(col, &d, rng)
}

/// [`transform_numeric_permute`] with a precomputed decomposition.
pub fn permute_numeric_with<R: Rng + ?Sized>(
    col: &AttributeColumn,
    d: &BirkhoffDecomposition,
    rng: &mut R,
) -> Result<AttributeColumn> {
    let x = numeric_values(col)?;
    if d.size() != x.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            found: d.size(),
        });
    }
    Ok(col.with_values(d.sample_permutation(rng).permute(x)))
}

/// Estimated original frequencies, possibly with small negative components.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEstimate {
    pub estimate: Vec<f64>,
    /// Set when sampling noise pushed some component below zero. Values are
    /// reported as computed, not clipped.
    pub has_negative: bool,
}

/// Unbiased estimate `π̂ = (Mᵀ)⁻¹ λ` of the original frequencies from the
/// observed ones.
///
/// `m` only needs to be right-stochastic. Fails with
/// [`Error::SingularMatrix`] when no inverse exists, e.g. under perfect secrecy.
pub fn estimate_frequencies(observed: &Distribution, m: &Matrix) -> Result<FrequencyEstimate> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != observed.len() {
        return Err(Error::SizeMismatch {
            expected: m.rows(),
            found: observed.len(),
        });
    }
    for (row, r) in m.iter_rows().enumerate() {
        let sum: f64 = r.iter().sum();
        if r.iter().any(|&v| !(v >= 0.0)) || (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(Error::NotRightStochastic { row, sum });
        }
    }
    let estimate = linalg::solve(&m.transpose(), observed.as_slice())?;
    let has_negative = estimate.iter().any(|&v| v < 0.0);
    Ok(FrequencyEstimate {
        estimate,
        has_negative,
    })
}

/// Independent random stream for column `index` under `seed`.
pub fn column_stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Checks that `m` and `mode` fit `col` without touching any data.
pub fn check_column(col: &AttributeColumn, m: &BistochasticMatrix, mode: ColumnMode) -> Result<()> {
    if col.is_categorical() && mode != ColumnMode::Sample {
        return Err(Error::ModeNotApplicable {
            column: col.name().into(),
            mode: mode.as_str(),
        });
    }
    require_strict(m)?;
    require_size(m, col.domain_size())
}

/// Applies one column's matrix in the given mode.
pub fn anonymize_column<R: Rng + ?Sized>(
    col: &AttributeColumn,
    m: &BistochasticMatrix,
    mode: ColumnMode,
    rng: &mut R,
) -> Result<AttributeColumn> {
    check_column(col, m, mode)?;
    match (col.is_categorical(), mode) {
        (true, _) => randomize_categorical(col, m, rng),
        (false, ColumnMode::Sample) => sample_numeric(col, m, rng),
        (false, ColumnMode::Linear) => transform_numeric_linear(col, m),
        (false, ColumnMode::Permute) => transform_numeric_permute(col, m, rng),
    }
}

/// Checks every column up front and reports all failures together.
pub fn check_conservative(
    ds: &Dataset,
    ms: &[BistochasticMatrix],
    modes: &[ColumnMode],
) -> Result<()> {
    let k = ds.column_count();
    if ms.len() != k {
        return Err(Error::LengthMismatch {
            left: k,
            right: ms.len(),
        });
    }
    if modes.len() != k {
        return Err(Error::LengthMismatch {
            left: k,
            right: modes.len(),
        });
    }
    let failures: Vec<ColumnError> = ds
        .columns()
        .iter()
        .zip(ms.iter().zip(modes))
        .filter_map(|(c, (m, &mode))| {
            check_column(c, m, mode).err().map(|error| ColumnError {
                column: c.name().into(),
                error,
            })
        })
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Columns(ColumnErrors(failures)))
    }
}

/// Anonymizes each column with its own matrix; the report carries the
/// conservative β of all matrices.
///
/// Column `i` draws from [`column_stream`]`(seed, i)`.
pub fn anonymize_conservative(
    ds: &Dataset,
    ms: &[BistochasticMatrix],
    modes: &[ColumnMode],
    seed: u64,
) -> Result<(Dataset, PrivacyReport)> {
    check_conservative(ds, ms, modes)?;
    let mut columns = Vec::with_capacity(ds.column_count());
    let mut failures = Vec::new();
    for (i, (col, (m, &mode))) in ds.columns().iter().zip(ms.iter().zip(modes)).enumerate() {
        match anonymize_column(col, m, mode, &mut column_stream(seed, i)) {
            Ok(c) => columns.push(c),
            Err(error) => failures.push(ColumnError {
                column: col.name().into(),
                error,
            }),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Columns(ColumnErrors(failures)));
    }
    let names: Vec<&str> = ds.columns().iter().map(AttributeColumn::name).collect();
    let report = PrivacyReport::conservative(&names, ms)?;
    Ok((Dataset::new(columns)?, report))
}

/// Product of the level counts, or [`Error::JointTooLarge`] beyond `cap`.
pub fn joint_domain_size(ds: &Dataset, cap: usize) -> Result<usize> {
    let mut size: usize = 1;
    for col in ds.columns() {
        let r = col
            .levels()
            .ok_or_else(|| Error::NonCategoricalColumn(col.name().into()))?
            .len();
        size = size
            .checked_mul(r)
            .filter(|&s| s <= cap)
            .ok_or(Error::JointTooLarge {
                size: size.saturating_mul(r),
                cap,
            })?;
    }
    Ok(size)
}

/// Mixed-radix index of a level tuple; the first column is most significant.
pub fn encode_joint(codes: &[usize], radices: &[usize]) -> usize {
    codes
        .iter()
        .zip(radices)
        .fold(0, |acc, (&c, &r)| acc * r + c)
}

pub fn decode_joint(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut codes = alloc::vec![0; radices.len()];
    for (slot, &r) in codes.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    codes
}

/// Randomizes whole records through one matrix on the joint category domain.
pub fn joint_randomize<R: Rng + ?Sized>(
    ds: &Dataset,
    m: &BistochasticMatrix,
    rng: &mut R,
) -> Result<(Dataset, PrivacyReport)> {
    joint_randomize_with_cap(ds, m, JOINT_SIZE_CAP, rng)
}

pub fn joint_randomize_with_cap<R: Rng + ?Sized>(
    ds: &Dataset,
    m: &BistochasticMatrix,
    cap: usize,
    rng: &mut R,
) -> Result<(Dataset, PrivacyReport)> {
    let size = joint_domain_size(ds, cap)?;
    require_strict(m)?;
    require_size(m, size)?;
    let radices: Vec<usize> = ds
        .columns()
        .iter()
        .map(AttributeColumn::domain_size)
        .collect();
    let code_columns: Vec<&[usize]> = ds
        .columns()
        .iter()
        .map(|c| c.codes().expect("checked categorical"))
        .collect();

    let rows = row_samplers(m);
    let mut out: Vec<Vec<usize>> = radices
        .iter()
        .map(|_| Vec::with_capacity(ds.record_count()))
        .collect();
    let mut tuple = alloc::vec![0; radices.len()];
    for rec in 0..ds.record_count() {
        for (t, codes) in tuple.iter_mut().zip(&code_columns) {
            *t = codes[rec];
        }
        let v = rows[encode_joint(&tuple, &radices)].sample(rng);
        for (col, c) in out.iter_mut().zip(decode_joint(v, &radices)) {
            col.push(c);
        }
    }
    let columns = ds
        .columns()
        .iter()
        .zip(out)
        .map(|(c, codes)| c.with_codes(codes))
        .collect();
    let name = ds
        .columns()
        .iter()
        .map(AttributeColumn::name)
        .collect::<Vec<_>>()
        .join("*");
    let report = PrivacyReport::joint(name, m, size)?;
    Ok((Dataset::new(columns)?, report))
}
