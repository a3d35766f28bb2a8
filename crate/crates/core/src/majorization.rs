//! Majorization order and the action of bistochastic matrices on distributions.
//!
//! `x ≻ y` (x majorizes y) when, with both sorted in decreasing order, every
//! prefix sum of `x` is at least the matching prefix sum of `y`. A vector is
//! majorized by `Pᵀ` of itself exactly when `P` can be taken bistochastic, so
//! bistochastic anonymization never makes an attribute less uncertain.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::matrix::{BistochasticMatrix, Distribution, Matrix};
use crate::{Error, Result};

const PREFIX_TOLERANCE: f64 = 1e-12;

/// Whether `x ≻ y`, comparing sorted prefix sums with a `1e-12` tolerance.
pub fn majorizes(x: &Distribution, y: &Distribution) -> Result<bool> {
    majorizes_slices(x.as_slice(), y.as_slice())
}

fn majorizes_slices(x: &[f64], y: &[f64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let xs = sorted_descending(x);
    let ys = sorted_descending(y);
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx < sy - PREFIX_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sorted_descending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `Pᵀp`: the distribution of the output when the input is distributed as `p`.
pub fn apply_to_distribution(m: &BistochasticMatrix, p: &Distribution) -> Result<Distribution> {
    if !m.is_strict() {
        return Err(Error::NotStrictlyBistochastic(m.super_slack()));
    }
    apply_transition(m.entries(), p)
}

/// `Mᵀp` for any right-stochastic `M` (rows sum to one).
pub fn apply_transition(m: &Matrix, p: &Distribution) -> Result<Distribution> {
    if m.rows() != p.len() {
        return Err(Error::SizeMismatch {
            expected: m.rows(),
            found: p.len(),
        });
    }
    Distribution::from_weights(&m.transpose_mul_vec(p.as_slice()))
}

/// Reverse mapping: replaces each anonymized value by the original value of
/// the same rank.
///
/// `z_i = x_(j)` where `j` is the rank of `y_i` within `anonymized` and
/// `x_(j)` is the `j`-th smallest original value. Ties (and incomparable
/// values) rank by position. The output is a permutation of `original` with
/// the rank order of `anonymized`.
pub fn reverse_map<T: Clone + PartialOrd, U: PartialOrd>(
    original: &[T],
    anonymized: &[U],
) -> Result<Vec<T>> {
    if original.len() != anonymized.len() {
        return Err(Error::LengthMismatch {
            left: original.len(),
            right: anonymized.len(),
        });
    }
    let mut sorted: Vec<&T> = original.iter().collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));

    let mut order: Vec<usize> = (0..anonymized.len()).collect();
    order.sort_by(|&a, &b| {
        anonymized[a]
            .partial_cmp(&anonymized[b])
            .unwrap_or(Ordering::Equal)
    });
    let mut out: Vec<Option<T>> = (0..original.len()).map(|_| None).collect();
    for (rank, &i) in order.iter().enumerate() {
        out[i] = Some(sorted[rank].clone());
    }
    Ok(out
        .into_iter()
        .map(|v| v.expect("every position ranked"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{dp_matrix, perfect_secrecy_matrix};

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn point_mass_majorizes() {
        assert!(majorizes(&d(&[1.0, 0.0, 0.0]), &d(&[0.5, 0.5, 0.0])).unwrap());
        assert!(!majorizes(&d(&[0.5, 0.5, 0.0]), &d(&[1.0, 0.0, 0.0])).unwrap());
    }

    #[test]
    fn everything_majorizes_uniform() {
        let u = Distribution::uniform(3).unwrap();
        assert!(majorizes(&d(&[0.5, 0.3, 0.2]), &u).unwrap());
    }

    #[test]
    fn incomparable_pair() {
        let x = d(&[0.6, 0.2, 0.2]);
        let y = d(&[0.5, 0.4, 0.1]);
        assert!(!majorizes(&x, &y).unwrap());
        assert!(!majorizes(&y, &x).unwrap());
    }

    #[test]
    fn order_does_not_matter() {
        assert!(majorizes(&d(&[0.0, 0.1, 0.9]), &d(&[0.8, 0.1, 0.1])).unwrap());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            majorizes(&d(&[1.0]), &d(&[0.5, 0.5])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn secrecy_uniformizes() {
        let q = apply_to_distribution(
            &perfect_secrecy_matrix(4).unwrap(),
            &d(&[0.7, 0.1, 0.1, 0.1]),
        )
        .unwrap();
        for v in q.as_slice() {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_and_dp_action() {
        let p = d(&[0.2, 0.3, 0.5]);
        let id = BistochasticMatrix::identity(3).unwrap();
        assert_eq!(apply_to_distribution(&id, &p).unwrap(), p);
        let e2 = libm::exp(2.0);
        let q = apply_to_distribution(&dp_matrix(3, 2.0).unwrap(), &d(&[1.0, 0.0, 0.0])).unwrap();
        let expected = [e2 / (2.0 + e2), 1.0 / (2.0 + e2), 1.0 / (2.0 + e2)];
        for (a, b) in q.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            apply_to_distribution(&id, &d(&[0.5, 0.5])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn reverse_map_examples() {
        assert_eq!(
            reverse_map(&[10, 20, 30], &[0.3, 0.1, 0.2]).unwrap(),
            vec![30, 10, 20]
        );
        assert_eq!(
            reverse_map(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(reverse_map(&[5, 5, 7], &[2, 1, 3]).unwrap(), vec![5, 5, 7]);
        assert!(reverse_map(&[1, 2], &[1]).is_err());
    }
}
