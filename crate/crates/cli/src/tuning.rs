//! Finding the scalar parameter of a matrix family that yields a requested β.
//!
//! Each family is monotone on the searched interval, so plain bisection
//! applies. The constant tridiagonal family is not monotone over `[0, 1/2]`;
//! it is searched on `[0, α_max]` where `α_max` maximizes β.

use bistochastic::constructors::{constant_circulant, constant_tridiagonal, dp_matrix};
use bistochastic::entropy::beta;
use bistochastic::BistochasticMatrix;

use crate::error::{CliError, Result};

/// Largest deviation from the target that a solution may have.
pub const BETA_TOLERANCE: f64 = 1e-4;
const MAX_EPSILON: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Dp,
    Circulant,
    Tridiagonal,
}

impl Family {
    fn build(self, r: usize, param: f64) -> Result<BistochasticMatrix> {
        match self {
            Family::Dp => dp_matrix(r, param),
            Family::Circulant => constant_circulant(r, param),
            Family::Tridiagonal => constant_tridiagonal(r, param),
        }
        .map_err(|e| CliError::model("matrix", e))
    }

    fn beta_at(self, r: usize, param: f64) -> Result<f64> {
        beta(&self.build(r, param)?).map_err(|e| CliError::model("matrix", e))
    }
}

/// Parameter (ε, p11 or α) for which the family's size-`r` matrix has β
/// within [`BETA_TOLERANCE`] of `target`.
pub fn solve_for_beta(family: Family, r: usize, target: f64) -> Result<f64> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(CliError::Invalid(format!(
            "target beta must lie in (0, 1], got {target}"
        )));
    }
    if r < 2 {
        return Err(CliError::Invalid(format!(
            "size must be at least 2, got {r}"
        )));
    }
    // (lo, hi) with beta(lo) >= target >= beta(hi) when reachable
    let (lo, hi) = match family {
        Family::Dp => (0.0, MAX_EPSILON),
        Family::Circulant => (1.0 / r as f64, 1.0),
        Family::Tridiagonal => (peak_tridiagonal(r)?, 0.0),
    };
    let (b_lo, b_hi) = (family.beta_at(r, lo)?, family.beta_at(r, hi)?);
    if target > b_lo + BETA_TOLERANCE || target < b_hi - BETA_TOLERANCE {
        return Err(CliError::Invalid(format!(
            "target beta {target} is outside the reachable range [{b_hi:.6}, {b_lo:.6}] for this family"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if family.beta_at(r, mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let param = 0.5 * (lo + hi);
    let got = family.beta_at(r, param)?;
    if (got - target).abs() > BETA_TOLERANCE {
        return Err(CliError::Invalid(format!(
            "bisection reached beta {got}, target {target}"
        )));
    }
    Ok(param)
}

/// α in `[0, 1/2]` maximizing β of the constant tridiagonal family (golden section).
fn peak_tridiagonal(r: usize) -> Result<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 0.5f64);
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if Family::Tridiagonal.beta_at(r, c)? > Family::Tridiagonal.beta_at(r, d)? {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(0.5 * (a + b))
}
