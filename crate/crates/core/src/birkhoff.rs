//! Birkhoff–von Neumann decomposition.
//!
//! Any bistochastic matrix is a convex combination of permutation matrices,
//! i.e. a probabilistic permutation. [`decompose`] finds one such combination
//! by greedy peeling:
//!
//! 1. find a perfect matching in the bipartite graph of entries above the
//!    zero threshold;
//! 2. take the smallest matched entry as the weight of that permutation;
//! 3. subtract it along the matching and clamp near-zero residue to zero.
//!
//! Each step zeroes at least one entry, so the loop ends after at most `r²`
//! steps. Matching is deterministic: rows are scanned in ascending order and
//! each row prefers its largest admissible entries (lowest column on ties),
//! first greedily among free columns, then through augmenting paths.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;

use crate::matrix::{BistochasticMatrix, Matrix};
use crate::{Error, Result};

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;
const MAX_ZERO_THRESHOLD: f64 = 1e-6;
const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// A bijection on `0..n`, stored as its images: row `i` maps to column `self[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || seen[j] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[j] = true;
        }
        Ok(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// The 0/1 matrix with a one at `(i, σ(i))`.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.len(), self.len());
        for (i, &j) in self.0.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        m
    }

    /// Moves the value at position `i` to position `σ(i)`: `y[σ(i)] = x[i]`,
    /// which is `y = Pᵀx` for the permutation matrix `P`.
    pub fn permute<T: Clone>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.len(), "slice length must match permutation");
        let inv = self.inverse();
        inv.0.iter().map(|&i| x[i].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffTerm {
    pub weight: f64,
    pub permutation: Permutation,
}

/// Weights `λ_j` and permutations `P_j` with `Σ λ_j P_j = P`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffDecomposition {
    size: usize,
    terms: Vec<BirkhoffTerm>,
}

/// Upper bound on the number of permutations needed for an `r×r` matrix.
pub fn max_terms(r: usize) -> usize {
    (r * r + 2).saturating_sub(2 * r)
}

impl BirkhoffDecomposition {
    /// Checks weights in `(0, 1]` summing to one, distinct permutations of
    /// the right size, and the term-count bound.
    pub fn from_terms(size: usize, terms: Vec<BirkhoffTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidDecomposition("no terms".into()));
        }
        if terms.len() > max_terms(size) {
            return Err(Error::InvalidDecomposition(format!(
                "{} terms exceed the bound {}",
                terms.len(),
                max_terms(size)
            )));
        }
        let mut sum = 0.0;
        for (k, t) in terms.iter().enumerate() {
            if !(t.weight > 0.0 && t.weight <= 1.0 + WEIGHT_SUM_TOLERANCE) {
                return Err(Error::InvalidDecomposition(format!(
                    "term {k} has weight {}",
                    t.weight
                )));
            }
            if t.permutation.len() != size {
                return Err(Error::SizeMismatch {
                    expected: size,
                    found: t.permutation.len(),
                });
            }
            if terms[..k].iter().any(|o| o.permutation == t.permutation) {
                return Err(Error::InvalidDecomposition(format!(
                    "term {k} repeats a permutation"
                )));
            }
            sum += t.weight;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidDecomposition(format!("weights sum to {sum}")));
        }
        Ok(Self { size, terms })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn terms(&self) -> &[BirkhoffTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn recompose(&self) -> Matrix {
        recompose(self)
    }

    /// Draws one permutation with probability equal to its weight.
    pub fn sample_permutation<R: Rng + ?Sized>(&self, rng: &mut R) -> &Permutation {
        sample_permutation(self, rng)
    }
}

/// Greedy Birkhoff peeling of a strictly bistochastic matrix.
pub fn decompose(m: &BistochasticMatrix, zero_threshold: f64) -> Result<BirkhoffDecomposition> {
    if !(zero_threshold > 0.0 && zero_threshold <= MAX_ZERO_THRESHOLD) {
        return Err(Error::ThresholdOutOfRange(zero_threshold));
    }
    if !m.is_strict() {
        return Err(Error::NotStrictlyBistochastic(m.super_slack()));
    }
    let r = m.size();
    let mut residual = m.entries().clone();
    clamp(&mut residual, zero_threshold);

    let mut terms = Vec::new();
    loop {
        let residual_max = residual.max_entry();
        if residual_max <= 0.0 {
            break;
        }
        let Some(images) = perfect_matching(&residual, zero_threshold) else {
            if residual_max <= r as f64 * zero_threshold {
                break;
            }
            return Err(Error::NoPerfectMatching {
                terms: terms.len(),
                residual_max,
            });
        };
        let weight = images
            .iter()
            .enumerate()
            .map(|(i, &j)| residual[(i, j)])
            .fold(f64::INFINITY, f64::min);
        for (i, &j) in images.iter().enumerate() {
            residual[(i, j)] -= weight;
        }
        clamp(&mut residual, zero_threshold);
        terms.push(BirkhoffTerm {
            weight,
            permutation: Permutation(images),
        });
    }
    if terms.is_empty() {
        return Err(Error::NoPerfectMatching {
            terms: 0,
            residual_max: 0.0,
        });
    }
    Ok(BirkhoffDecomposition { size: r, terms })
}

fn clamp(m: &mut Matrix, threshold: f64) {
    let (rows, cols) = (m.rows(), m.cols());
    for i in 0..rows {
        for j in 0..cols {
            if m[(i, j)] <= threshold {
                m[(i, j)] = 0.0;
            }
        }
    }
}

/// Perfect matching on entries above `threshold`, returned as row → column.
fn perfect_matching(m: &Matrix, threshold: f64) -> Option<Vec<usize>> {
    let n = m.rows();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let mut cols: Vec<usize> = (0..n).filter(|&j| row[j] > threshold).collect();
            // stable sort keeps ascending column order among equal values
            cols.sort_by(|&a, &b| {
                row[b]
                    .partial_cmp(&row[a])
                    .unwrap_or(core::cmp::Ordering::Equal)
            });
            cols
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut matched = vec![false; n];
    for (i, cols) in adjacency.iter().enumerate() {
        if let Some(&j) = cols.iter().find(|&&j| owner[j].is_none()) {
            owner[j] = Some(i);
            matched[i] = true;
        }
    }
    let mut visited = vec![false; n];
    for i in (0..n).filter(|&i| !matched[i]) {
        visited.iter_mut().for_each(|v| *v = false);
        if !augment(i, &adjacency, &mut owner, &mut visited) {
            return None;
        }
    }

    let mut images = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        images[(*o)?] = j;
    }
    Some(images)
}

fn augment(
    row: usize,
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &j in &adjacency[row] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        let free = match owner[j] {
            None => true,
            Some(other) => augment(other, adjacency, owner, visited),
        };
        if free {
            owner[j] = Some(row);
            return true;
        }
    }
    false
}

/// `Σ_j λ_j P_j`.
pub fn recompose(d: &BirkhoffDecomposition) -> Matrix {
    let mut m = Matrix::zeros(d.size, d.size);
    for t in &d.terms {
        for (i, &j) in t.permutation.images().iter().enumerate() {
            m[(i, j)] += t.weight;
        }
    }
    m
}

pub fn sample_permutation<'a, R: Rng + ?Sized>(
    d: &'a BirkhoffDecomposition,
    rng: &mut R,
) -> &'a Permutation {
    if d.terms.len() == 1 {
        return &d.terms[0].permutation;
    }
    let index = WeightedIndex::new(d.terms.iter().map(|t| t.weight))
        .expect("decomposition weights are positive");
    &d.terms[index.sample(rng)].permutation
}
