mod common;

use bistochastic::entropy::shannon_entropy;
use bistochastic::majorization::{apply_to_distribution, apply_transition, majorizes, reverse_map};
use bistochastic::Distribution;
use common::{random_bistochastic, random_distribution, random_right_stochastic};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn bistochastic_action_never_increases_peakedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let n = rng.gen_range(2..12);
        let m = random_bistochastic(n, rng.gen_range(1..=n + 2), &mut rng);
        let p = random_distribution(n, &mut rng);
        let q = apply_to_distribution(&m, &p).unwrap();
        assert!(majorizes(&p, &q).unwrap());
        assert!(shannon_entropy(q.as_slice()) >= shannon_entropy(p.as_slice()) - 1e-12);
    }
}

/// Candidate inputs of varying concentration, from nearly uniform to peaked.
fn candidate<R: Rng>(n: usize, rng: &mut R) -> Distribution {
    let spread = rng.gen_range(0.0..1.0f64).powi(3);
    let w: Vec<f64> = (0..n)
        .map(|_| 1.0 + spread * n as f64 * rng.gen::<f64>())
        .collect();
    Distribution::from_weights(&w).unwrap()
}

#[test]
fn right_stochastic_matrices_can_concentrate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut falsified = 0;
    for _ in 0..50 {
        let n = rng.gen_range(3..10);
        let m = random_right_stochastic(n, &mut rng);
        let found = (0..100).any(|_| {
            let p = candidate(n, &mut rng);
            let q = apply_transition(&m, &p).unwrap();
            !majorizes(&p, &q).unwrap()
        });
        falsified += usize::from(found);
    }
    assert!(falsified >= 45, "only {falsified}/50 matrices falsified");
}

proptest! {
    #[test]
    fn majorization_reflexive_and_transitive(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_distribution(n, &mut rng);
        prop_assert!(majorizes(&x, &x).unwrap());
        let m1 = random_bistochastic(n, 3, &mut rng);
        let m2 = random_bistochastic(n, 3, &mut rng);
        let y = apply_to_distribution(&m1, &x).unwrap();
        let z = apply_to_distribution(&m2, &y).unwrap();
        prop_assert!(majorizes(&x, &y).unwrap() && majorizes(&y, &z).unwrap());
        prop_assert!(majorizes(&x, &z).unwrap());
    }

    #[test]
    fn majorization_antisymmetric_up_to_order(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_distribution(n, &mut rng);
        let y = random_distribution(n, &mut rng);
        if majorizes(&x, &y).unwrap() && majorizes(&y, &x).unwrap() {
            let mut a = x.into_vec();
            let mut b = y.into_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn reverse_map_is_rank_preserving_permutation(
        x in proptest::collection::vec(-50i32..50, 1..40),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = x.iter().map(|_| rng.gen::<f64>()).collect();
        let z = reverse_map(&x, &y).unwrap();
        let mut zs = z.clone();
        let mut xs = x.clone();
        zs.sort();
        xs.sort();
        prop_assert_eq!(zs, xs);
        for i in 0..y.len() {
            for j in 0..y.len() {
                if y[i] < y[j] {
                    prop_assert!(z[i] <= z[j]);
                }
            }
        }
    }
}
