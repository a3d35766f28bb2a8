use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Pivots below this fraction of the largest entry are treated as zero.
const RELATIVE_PIVOT_EPS: f64 = 1e-10;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let scale = a.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if n == 0 || scale == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let eps = RELATIVE_PIVOT_EPS * scale;

    let mut lu = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let (pivot_row, pivot) =
            (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(pivot > eps) {
            return Err(Error::SingularMatrix);
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
            x.swap(k, pivot_row);
        }
        for i in k + 1..n {
            let factor = lu[(i, k)] / lu[(k, k)];
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= factor * v;
            }
            x[i] -= factor * x[k];
        }
    }
    for k in (0..n).rev() {
        let tail: f64 = (k + 1..n).map(|j| lu[(k, j)] * x[j]).sum();
        x[k] = (x[k] - tail) / lu[(k, k)];
    }
    Ok(x)
}
