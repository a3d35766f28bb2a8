mod common;

use bistochastic::constructors::{
    anatomy_matrix, constant_circulant, constant_tridiagonal, dp_matrix, perfect_secrecy_matrix,
    tridiagonal_matrix,
};
use bistochastic::entropy::{beta, conservative_beta, entropy_rate, joint_beta, shannon_entropy};
use bistochastic::pram::estimate_frequencies;
use bistochastic::{AnatomyPartition, BistochasticMatrix, Distribution, Error, Matrix};
use common::{random_bistochastic, random_weights};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn product_of_bistochastic_is_bistochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb15);
    for trial in 0..120 {
        let n = 2 + trial % 15;
        let a = random_bistochastic(n, 1 + rng.gen_range(0..n), &mut rng);
        let b = random_bistochastic(n, 1 + rng.gen_range(0..n), &mut rng);
        a.product(&b, 1e-8).expect("closed under multiplication");
    }
}

#[test]
fn diagonally_dominant_matrices_are_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..10);
        // heavy identity weight pushes the diagonal above 1/2
        let noise = random_bistochastic(n, n, &mut rng);
        let w = rng.gen_range(0.5..1.0);
        let m = Matrix::from_fn(n, n, |i, j| {
            w * f64::from(u8::from(i == j)) + (1.0 - w) * noise.get(i, j)
        });
        let m = BistochasticMatrix::new(m).unwrap();
        if !m.is_diagonally_dominant() {
            continue;
        }
        let b = random_weights(n, &mut rng);
        let est =
            estimate_frequencies(&Distribution::new(b.clone()).unwrap(), m.entries()).unwrap();
        let back = m.entries().transpose_mul_vec(&est.estimate);
        let residual = back
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(residual < 1e-8, "residual {residual}");
        checked += 1;
    }
}

#[test]
fn constructors_validate_tightly() {
    let strict = |m: BistochasticMatrix| {
        BistochasticMatrix::validate(m.into_matrix(), 1e-12, 0.0).unwrap();
    };
    for r in [2, 3, 7, 12, 20] {
        strict(dp_matrix(r, 1.3).unwrap());
        strict(perfect_secrecy_matrix(r).unwrap());
        strict(constant_circulant(r, 0.37).unwrap());
        strict(constant_tridiagonal(r, 0.3).unwrap());
        strict(anatomy_matrix(&AnatomyPartition::contiguous(r, 3).unwrap()).unwrap());
    }
}

#[test]
fn dp_is_a_constant_circulant() {
    for r in [2, 3, 12] {
        assert_eq!(
            dp_matrix(r, 0.0).unwrap(),
            perfect_secrecy_matrix(r).unwrap()
        );
        for eps in [0.1f64, 1.0, 2.5, 8.0] {
            let e = eps.exp();
            let c = constant_circulant(r, e / (r as f64 - 1.0 + e)).unwrap();
            assert!(
                dp_matrix(r, eps)
                    .unwrap()
                    .entries()
                    .max_abs_diff(c.entries())
                    <= 1e-15
            );
        }
    }
}

#[test]
fn anatomy_blocks_are_idempotent() {
    let p = AnatomyPartition::new(vec![vec![0, 4], vec![1, 2, 5], vec![3]]).unwrap();
    let m = anatomy_matrix(&p).unwrap();
    let sq = m.product(&m, 1e-12).unwrap();
    assert!(sq.entries().max_abs_diff(m.entries()) < 1e-15);
}

#[test]
fn ergodicized_anatomy() {
    let p = AnatomyPartition::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
    let e = anatomy_matrix(&p).unwrap().ergodicize(1e-6).unwrap();
    assert_eq!(e.get(0, 2), 1e-6);
    assert_eq!(e.get(3, 1), 1e-6);
    assert_eq!(e.get(0, 0), 0.5);
    for s in e.entries().row_sums() {
        assert!((s - (1.0 + 2e-6)).abs() < 1e-15);
    }
    assert!(e.is_strictly_positive());
    // strictly positive input: fixed point
    assert_eq!(e.ergodicize(1e-6).unwrap(), e);
}

#[test]
fn rejects_size_one_budget() {
    assert_eq!(
        beta(&BistochasticMatrix::identity(1).unwrap()),
        Err(Error::DegenerateSize)
    );
}

fn natural_log_rate(m: &BistochasticMatrix) -> f64 {
    // independent route: nats per row, converted once at the end
    let r = m.size() as f64;
    let nats: f64 = m
        .entries()
        .as_slice()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    nats / r / std::f64::consts::LN_2
}

#[test]
fn beta_strictly_decreasing_in_epsilon() {
    for r in [3, 12] {
        let grid: Vec<f64> = (0..=16)
            .map(|i| beta(&dp_matrix(r, i as f64 * 0.5).unwrap()).unwrap())
            .collect();
        for w in grid.windows(2) {
            assert!(w[1] < w[0], "{grid:?}");
        }
    }
}

#[test]
fn kronecker_entropy_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..60 {
        let (a_n, b_n) = (rng.gen_range(2..6), rng.gen_range(2..6));
        let a = random_bistochastic(a_n, rng.gen_range(1..=a_n), &mut rng);
        let b = random_bistochastic(b_n, rng.gen_range(1..=b_n), &mut rng);
        let joint = a.kronecker(&b).unwrap();
        let jb = joint_beta(&joint, a_n * b_n).unwrap();
        let cb = conservative_beta(&[a.clone(), b.clone()]).unwrap();
        assert!((jb - cb).abs() <= 1e-9, "{jb} vs {cb}");
        assert!((entropy_rate(&joint) - entropy_rate(&a) - entropy_rate(&b)).abs() <= 1e-9);
    }
}

#[test]
fn tridiagonal_with_varying_alphas() {
    let m = tridiagonal_matrix(&[0.2, 0.5, 0.1]).unwrap();
    assert_eq!(m.entries(), &m.entries().transpose());
    assert!((m.get(1, 1) - 0.3).abs() < 1e-15);
    assert!((m.get(2, 2) - 0.4).abs() < 1e-15);
}

proptest! {
    #[test]
    fn convex_combinations_validate(seed in any::<u64>(), n in 2usize..20, k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bistochastic(n, k, &mut rng);
        prop_assert!(BistochasticMatrix::validate(m.into_matrix(), 1e-12, 0.0).is_ok());
    }

    #[test]
    fn beta_in_unit_interval(seed in any::<u64>(), n in 2usize..16, k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bistochastic(n, k, &mut rng);
        let b = beta(&m).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
    }

    #[test]
    fn entropy_rate_matches_row_mean(seed in any::<u64>(), n in 1usize..16, k in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bistochastic(n, k, &mut rng);
        let mean = m.entries().iter_rows().map(shannon_entropy).sum::<f64>() / n as f64;
        prop_assert!((entropy_rate(&m) - mean).abs() <= 1e-12);
        prop_assert!((entropy_rate(&m) - natural_log_rate(&m)).abs() <= 1e-12);
    }

    #[test]
    fn tridiagonal_is_symmetric(r in 1usize..20, alpha in 0.0f64..=0.5) {
        let m = constant_tridiagonal(r, alpha).unwrap();
        prop_assert_eq!(m.entries(), &m.entries().transpose());
    }

    #[test]
    fn ergodicize_idempotent(seed in any::<u64>(), n in 2usize..10, gamma in 1e-9f64..1e-3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bistochastic(n, 2, &mut rng);
        let once = m.ergodicize(gamma).unwrap();
        prop_assert!(once.is_strictly_positive());
        prop_assert_eq!(once.ergodicize(gamma).unwrap(), once.clone());
    }
}
