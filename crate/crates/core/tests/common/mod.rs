#![allow(dead_code)]

use bistochastic::{BistochasticMatrix, Distribution, Matrix};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_weights<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    // exponential spacings give a flat Dirichlet
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// Random convex combination of `terms` random permutation matrices.
pub fn random_bistochastic<R: Rng>(n: usize, terms: usize, rng: &mut R) -> BistochasticMatrix {
    let mut m = Matrix::zeros(n, n);
    for w in random_weights(terms, rng) {
        for (i, j) in random_permutation(n, rng).into_iter().enumerate() {
            m[(i, j)] += w;
        }
    }
    BistochasticMatrix::validate(m, 1e-12, 0.0).expect("convex combination of permutations")
}

pub fn random_distribution<R: Rng>(n: usize, rng: &mut R) -> Distribution {
    Distribution::new(random_weights(n, rng)).unwrap()
}

/// Rows are independent random probability vectors; columns generally are not.
pub fn random_right_stochastic<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| random_weights(n, rng)).collect();
    Matrix::from_rows(&rows).unwrap()
}

pub fn frequencies(codes: &[usize], r: usize) -> Vec<f64> {
    let mut f = vec![0.0; r];
    for &c in codes {
        f[c] += 1.0;
    }
    f.iter().map(|x| x / codes.len() as f64).collect()
}
