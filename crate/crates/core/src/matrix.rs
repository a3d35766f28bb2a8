//! Dense matrices, bistochastic validation and probability vectors.
//!
//! [`BistochasticMatrix`] can only be obtained through
//! [`BistochasticMatrix::validate`] (or a constructor that calls it), so every
//! other module can rely on its invariants: nonnegative entries, and row and
//! column sums in `[1 - tolerance, 1 + super_slack + tolerance]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Tolerance used when a matrix is built in memory.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Tolerance used for matrices read back from decimal text.
pub const FILE_TOLERANCE: f64 = 1e-6;
/// Tolerance on the total mass of a [`Distribution`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;
/// Largest γ accepted by [`BistochasticMatrix::ergodicize`].
pub const MAX_GAMMA: f64 = 1e-3;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a list of rows; all rows must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::RaggedRows {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.iter_rows().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self * other`. Panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `selfᵀ x`, i.e. `y_j = Σ_i m_ij x_i`. Panics if `x.len() != rows`.
    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "vector length must equal row count");
        let mut y = vec![0.0; self.cols];
        for (row, &xi) in self.iter_rows().zip(x) {
            for (yj, &m) in y.iter_mut().zip(row) {
                *yj += m * xi;
            }
        }
        y
    }

    /// Kronecker product; index `(i, j)` of `self` is the most significant digit.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Largest absolute entrywise difference. Panics on different shapes.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// A square nonnegative matrix whose rows and columns sum to one.
///
/// `super_slack` is the excess above one that row and column sums are allowed
/// to carry; it is zero except for matrices produced by
/// [`ergodicize`](Self::ergodicize).
#[derive(Debug, Clone, PartialEq)]
pub struct BistochasticMatrix {
    entries: Matrix,
    tolerance: f64,
    super_slack: f64,
}

impl BistochasticMatrix {
    pub fn validate(entries: Matrix, tolerance: f64, super_slack: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidTolerance(tolerance));
        }
        if !(super_slack >= 0.0 && super_slack.is_finite()) {
            return Err(Error::InvalidSlack(super_slack));
        }
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        if entries.rows() == 0 {
            return Err(Error::Empty);
        }
        for (i, row) in entries.iter_rows().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        let lo = 1.0 - tolerance;
        let hi = 1.0 + super_slack + tolerance;
        for (row, sum) in entries.row_sums().into_iter().enumerate() {
            if !(lo..=hi).contains(&sum) {
                return Err(Error::RowSumViolation { row, sum });
            }
        }
        for (col, sum) in entries.col_sums().into_iter().enumerate() {
            if !(lo..=hi).contains(&sum) {
                return Err(Error::ColumnSumViolation { col, sum });
            }
        }
        Ok(Self {
            entries,
            tolerance,
            super_slack,
        })
    }

    /// Validates with [`DEFAULT_TOLERANCE`] and no slack.
    pub fn new(entries: Matrix) -> Result<Self> {
        Self::validate(entries, DEFAULT_TOLERANCE, 0.0)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(Matrix::identity(n))
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.entries.row(i)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn super_slack(&self) -> f64 {
        self.super_slack
    }

    /// True when no slack above one is permitted.
    pub fn is_strict(&self) -> bool {
        self.super_slack == 0.0
    }

    /// Sufficient condition for nonsingularity: every diagonal entry exceeds 1/2.
    ///
    /// Failing the test says nothing about singularity.
    pub fn is_diagonally_dominant(&self) -> bool {
        (0..self.size()).all(|i| self.get(i, i) > 0.5)
    }

    /// True when every transition has positive probability (ergodic chain).
    pub fn is_strictly_positive(&self) -> bool {
        self.entries.as_slice().iter().all(|&v| v > 0.0)
    }

    /// Replaces every zero entry by `gamma` without touching the others.
    ///
    /// The result is "super doubly stochastic": its sums may exceed one by up
    /// to `size * gamma`, recorded in `super_slack`. A strictly positive
    /// matrix is returned unchanged.
    pub fn ergodicize(&self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= MAX_GAMMA) {
            return Err(Error::GammaOutOfRange(gamma));
        }
        if self.is_strictly_positive() {
            return Ok(self.clone());
        }
        let r = self.size();
        let entries = Matrix::from_fn(r, r, |i, j| {
            let v = self.get(i, j);
            if v == 0.0 {
                gamma
            } else {
                v
            }
        });
        Self::validate(entries, self.tolerance, self.super_slack + r as f64 * gamma)
    }

    /// Matrix product, validated at `tolerance`.
    pub fn product(&self, other: &Self, tolerance: f64) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Self::validate(self.entries.mul(&other.entries), tolerance, 0.0)
    }

    /// Kronecker composition of two attribute matrices into a joint one.
    /// `self` indexes the most significant digit of the joint category.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        let tol = self.tolerance.max(other.tolerance);
        Self::validate(self.entries.kronecker(&other.entries), tol, 0.0)
    }
}

/// A nonnegative vector summing to one within [`DISTRIBUTION_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::NotADistribution("empty".into()));
        }
        for (i, &p) in probabilities.iter().enumerate() {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::NotADistribution(format!("entry {i} is {p}")));
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(Error::NotADistribution(format!("sums to {sum}")));
        }
        Ok(Self(probabilities))
    }

    /// Normalizes nonnegative weights (e.g. counts) into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let mut total = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::NotADistribution(format!("weight {i} is {w}")));
            }
            total += w;
        }
        if !(total > 0.0) {
            return Err(Error::NotADistribution("total weight is zero".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotADistribution("empty".into()));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
