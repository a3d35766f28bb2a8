//! Named parameterizations of bistochastic matrices.
//!
//! Every constructor validates its output with the default tolerance and no
//! super slack.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{BistochasticMatrix, Distribution, Matrix};
use crate::{Error, Result};

/// ε-differentially private randomized response over `r` categories.
///
/// Diagonal `e^ε / (r - 1 + e^ε)`, off-diagonal `1 / (r - 1 + e^ε)`. Evaluated
/// through `e^-ε` so large ε does not overflow.
pub fn dp_matrix(r: usize, epsilon: f64) -> Result<BistochasticMatrix> {
    if r < 2 {
        return Err(Error::InvalidSize(r));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let damp = libm::exp(-epsilon);
    let denom = 1.0 + (r - 1) as f64 * damp;
    let diag = 1.0 / denom;
    let off = damp / denom;
    BistochasticMatrix::new(Matrix::from_fn(
        r,
        r,
        |i, j| if i == j { diag } else { off },
    ))
}

/// All entries `1/r`: the output carries no information about the input.
pub fn perfect_secrecy_matrix(r: usize) -> Result<BistochasticMatrix> {
    if r < 1 {
        return Err(Error::InvalidSize(r));
    }
    let p = 1.0 / r as f64;
    BistochasticMatrix::new(Matrix::from_fn(r, r, |_, _| p))
}

/// A partition of `0..n` into nonempty, pairwise disjoint classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnatomyPartition {
    classes: Vec<Vec<usize>>,
    len: usize,
}

impl AnatomyPartition {
    pub fn new(classes: Vec<Vec<usize>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidPartition("no classes".into()));
        }
        let len: usize = classes.iter().map(Vec::len).sum();
        let mut seen = vec![false; len];
        for (l, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {l} is empty")));
            }
            for &i in class {
                if i >= len {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} outside 0..{len} (gap in coverage)"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        Ok(Self { classes, len })
    }

    /// Consecutive classes of `k` indices; when `k` does not divide `n` the
    /// last class absorbs the remainder, so every class has at least `k`
    /// members (a single class if `k >= n`).
    pub fn contiguous(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidPartition(format!("n = {n}, k = {k}")));
        }
        let count = (n / k).max(1);
        let classes = (0..count)
            .map(|l| {
                let start = l * k;
                let end = if l + 1 == count { n } else { start + k };
                (start..end).collect()
            })
            .collect();
        Self::new(classes)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Number of indices covered.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Block-diagonal matrix with a uniform `1/n_l` block on each class.
pub fn anatomy_matrix(partition: &AnatomyPartition) -> Result<BistochasticMatrix> {
    let n = partition.len();
    let mut m = Matrix::zeros(n, n);
    for class in partition.classes() {
        let p = 1.0 / class.len() as f64;
        for &i in class {
            for &j in class {
                m[(i, j)] = p;
            }
        }
    }
    BistochasticMatrix::new(m)
}

/// Circulant matrix: row `i` is `first_row` rotated right by `i` positions.
pub fn circulant_matrix(first_row: &Distribution) -> Result<BistochasticMatrix> {
    let p = first_row.as_slice();
    let r = p.len();
    BistochasticMatrix::new(Matrix::from_fn(r, r, |i, j| p[(j + r - i) % r]))
}

/// Circulant with `p_diag` on the diagonal and the rest of each row spread evenly.
pub fn constant_circulant(r: usize, p_diag: f64) -> Result<BistochasticMatrix> {
    if r < 2 {
        return Err(Error::InvalidSize(r));
    }
    if !(0.0..=1.0).contains(&p_diag) {
        return Err(Error::InvalidProbability(p_diag));
    }
    let off = (1.0 - p_diag) / (r - 1) as f64;
    let mut row = vec![off; r];
    row[0] = p_diag;
    circulant_matrix(&Distribution::new(row)?)
}

/// Symmetric tridiagonal matrix from its `r - 1` off-diagonal parameters.
///
/// Entry `(i, i+1) = (i+1, i) = alphas[i]`; the diagonal completes each row to
/// one. Requires `alphas[i] >= 0` and `alphas[i-1] + alphas[i] <= 1`.
/// An empty slice gives the 1×1 identity.
pub fn tridiagonal_matrix(alphas: &[f64]) -> Result<BistochasticMatrix> {
    const SLACK: f64 = 1e-12;
    for (i, &a) in alphas.iter().enumerate() {
        if !(0.0..=1.0 + SLACK).contains(&a) {
            return Err(Error::AlphaConstraintViolated(i));
        }
        if i > 0 && alphas[i - 1] + a > 1.0 + SLACK {
            return Err(Error::AlphaConstraintViolated(i));
        }
    }
    let r = alphas.len() + 1;
    let mut m = Matrix::zeros(r, r);
    for (i, &a) in alphas.iter().enumerate() {
        m[(i, i + 1)] = a;
        m[(i + 1, i)] = a;
    }
    for i in 0..r {
        let left = if i > 0 { alphas[i - 1] } else { 0.0 };
        let right = alphas.get(i).copied().unwrap_or(0.0);
        m[(i, i)] = (1.0 - left - right).max(0.0);
    }
    BistochasticMatrix::new(m)
}

/// Tridiagonal matrix of size `r` with every off-diagonal parameter equal to `alpha`.
pub fn constant_tridiagonal(r: usize, alpha: f64) -> Result<BistochasticMatrix> {
    if r < 1 {
        return Err(Error::InvalidSize(r));
    }
    tridiagonal_matrix(&vec![alpha; r - 1])
}
