mod common;

use bistochastic::birkhoff::{decompose, Permutation, DEFAULT_ZERO_THRESHOLD};
use bistochastic::constructors::{dp_matrix, perfect_secrecy_matrix};
use bistochastic::pram::{
    anonymize_conservative, column_stream, estimate_frequencies, joint_randomize,
    permute_numeric_with, randomize_categorical, transform_numeric_linear,
    transform_numeric_permute,
};
use bistochastic::{AttributeColumn, BistochasticMatrix, ColumnMode, Dataset, Distribution};
use common::{frequencies, random_bistochastic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn categorical(name: &str, r: usize, codes: Vec<usize>) -> AttributeColumn {
    AttributeColumn::categorical(name, (0..r).map(|i| format!("L{i}")).collect(), codes).unwrap()
}

/// Records whose level frequencies match `pi` as closely as integer counts allow.
fn population(pi: &[f64], n: usize) -> Vec<usize> {
    let mut codes = Vec::with_capacity(n);
    for (level, p) in pi.iter().enumerate() {
        codes.extend(std::iter::repeat_n(level, (p * n as f64).round() as usize));
    }
    codes
}

#[test]
fn linear_transform_preserves_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(2..25);
        let m = random_bistochastic(n, rng.gen_range(1..=n), &mut rng);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..1000.0)).collect();
        let col = AttributeColumn::numerical("x", x.clone()).unwrap();
        let y = transform_numeric_linear(&col, &m).unwrap();
        let mx = x.iter().sum::<f64>() / n as f64;
        let my = y.values().unwrap().iter().sum::<f64>() / n as f64;
        assert!((mx - my).abs() <= 1e-12 * mx.abs().max(1.0), "{mx} vs {my}");
    }
}

#[test]
fn estimator_is_consistent() {
    let pi = [0.4, 0.3, 0.2, 0.1];
    let m = dp_matrix(4, 2.0).unwrap();
    let col = categorical("c", 4, population(&pi, 200_000));
    let out = randomize_categorical(&col, &m, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    let lambda = Distribution::new(frequencies(out.codes().unwrap(), 4)).unwrap();
    let est = estimate_frequencies(&lambda, m.entries()).unwrap();
    let worst = est
        .estimate
        .iter()
        .zip(pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 0.01, "{:?}", est.estimate);
}

#[test]
fn estimator_is_unbiased() {
    let pi = [0.4, 0.3, 0.2, 0.1];
    let m = dp_matrix(4, 2.0).unwrap();
    let col = categorical("c", 4, population(&pi, 10_000));
    let mut mean = [0.0; 4];
    for run in 0..200 {
        let out = randomize_categorical(&col, &m, &mut column_stream(99, run)).unwrap();
        let lambda = Distribution::new(frequencies(out.codes().unwrap(), 4)).unwrap();
        let est = estimate_frequencies(&lambda, m.entries()).unwrap();
        for (acc, v) in mean.iter_mut().zip(&est.estimate) {
            *acc += v / 200.0;
        }
    }
    for (a, b) in mean.iter().zip(pi) {
        assert!((a - b).abs() <= 0.005, "{mean:?}");
    }
}

#[test]
fn secrecy_output_is_uniform_for_degenerate_input() {
    for (r, level) in [(3, 0), (5, 4), (8, 2)] {
        let col = categorical("c", r, vec![level; 100_000]);
        let out = randomize_categorical(
            &col,
            &perfect_secrecy_matrix(r).unwrap(),
            &mut column_stream(17, r),
        )
        .unwrap();
        let tv: f64 = frequencies(out.codes().unwrap(), r)
            .iter()
            .map(|f| (f - 1.0 / r as f64).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.01, "total variation {tv} for r = {r}");
    }
}

#[test]
fn permute_outputs_are_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let n = rng.gen_range(2..15);
        let m = random_bistochastic(n, 4, &mut rng);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..20) as f64).collect();
        let col = AttributeColumn::numerical("x", x.clone()).unwrap();
        let y = transform_numeric_permute(&col, &m, &mut rng).unwrap();
        let mut a = x.clone();
        let mut b = y.values().unwrap().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }
}

#[test]
fn permute_frequencies_follow_weights() {
    let m = perfect_secrecy_matrix(3).unwrap();
    let d = decompose(&m, DEFAULT_ZERO_THRESHOLD).unwrap();
    let col = AttributeColumn::numerical("x", vec![1.0, 2.0, 3.0]).unwrap();
    let outcomes: Vec<Vec<f64>> = d
        .terms()
        .iter()
        .map(|t| t.permutation.permute(&[1.0, 2.0, 3.0]))
        .collect();
    let mut counts = vec![0usize; outcomes.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30_000 {
        let y = permute_numeric_with(&col, &d, &mut rng).unwrap();
        let k = outcomes
            .iter()
            .position(|o| o.as_slice() == y.values().unwrap())
            .unwrap();
        counts[k] += 1;
    }
    for (c, t) in counts.iter().zip(d.terms()) {
        assert!(
            (*c as f64 / 30_000.0 - t.weight).abs() <= 0.01,
            "{counts:?}"
        );
    }
}

#[test]
fn permute_expectation_is_linear_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let m = random_bistochastic(6, 6, &mut rng);
    let x: Vec<f64> = (0..6).map(|i| (i * i) as f64 / 5.0).collect();
    let col = AttributeColumn::numerical("x", x.clone()).unwrap();
    let d = decompose(&m, DEFAULT_ZERO_THRESHOLD).unwrap();
    let mut mean = [0.0; 6];
    for _ in 0..10_000 {
        let y = permute_numeric_with(&col, &d, &mut rng).unwrap();
        for (acc, v) in mean.iter_mut().zip(y.values().unwrap()) {
            *acc += v / 10_000.0;
        }
    }
    let target = m.entries().transpose_mul_vec(&x);
    for (a, b) in mean.iter().zip(&target) {
        assert!((a - b).abs() <= 0.05, "{mean:?} vs {target:?}");
    }
}

#[test]
fn identity_permutation_action() {
    let col = AttributeColumn::numerical("x", vec![3.0, 1.0]).unwrap();
    let d = decompose(&BistochasticMatrix::identity(2).unwrap(), 1e-12).unwrap();
    assert_eq!(d.terms()[0].permutation, Permutation::identity(2));
    assert_eq!(
        permute_numeric_with(&col, &d, &mut column_stream(0, 0)).unwrap(),
        col
    );
}

fn mixed_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Dataset::new(vec![
        categorical("a", 3, (0..n).map(|_| rng.gen_range(0..3)).collect()),
        categorical("b", 4, (0..n).map(|_| rng.gen_range(0..4)).collect()),
        AttributeColumn::numerical("x", (0..n).map(|_| rng.gen_range(0.0..10.0)).collect())
            .unwrap(),
    ])
    .unwrap()
}

#[test]
fn conservative_is_deterministic_and_order_independent() {
    let ds = mixed_dataset(30, 1);
    let ms = vec![
        dp_matrix(3, 1.0).unwrap(),
        perfect_secrecy_matrix(4).unwrap(),
        perfect_secrecy_matrix(30).unwrap(),
    ];
    let modes = [ColumnMode::Sample, ColumnMode::Sample, ColumnMode::Permute];
    let (a, ra) = anonymize_conservative(&ds, &ms, &modes, 123).unwrap();
    let (b, rb) = anonymize_conservative(&ds, &ms, &modes, 123).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
    // each column only depends on its own stream
    let single = bistochastic::pram::anonymize_column(
        &ds.columns()[1],
        &ms[1],
        modes[1],
        &mut column_stream(123, 1),
    )
    .unwrap();
    assert_eq!(single, a.columns()[1]);
    let (c, _) = anonymize_conservative(&ds, &ms, &modes, 124).unwrap();
    assert_ne!(a, c);
}

#[test]
fn conservative_dp_columns_report_beta() {
    let ds = Dataset::new(vec![
        categorical("a", 12, (0..50).map(|i| i % 12).collect()),
        categorical("b", 12, (0..50).map(|i| (i * 5) % 12).collect()),
    ])
    .unwrap();
    let ms = vec![dp_matrix(12, 1.0).unwrap(), dp_matrix(12, 1.0).unwrap()];
    let (_, report) = anonymize_conservative(&ds, &ms, &[ColumnMode::Sample; 2], 9).unwrap();
    assert!((report.aggregate_beta - 0.9741126779170416).abs() < 1e-12);
}

fn binary_pair(n: usize) -> Dataset {
    Dataset::new(vec![
        categorical("a", 2, (0..n).map(|i| usize::from(i % 4 == 0)).collect()),
        categorical("b", 2, (0..n).map(|i| usize::from(i % 3 == 0)).collect()),
    ])
    .unwrap()
}

#[test]
fn joint_secrecy_is_uniform() {
    let ds = binary_pair(40_000);
    let (out, report) = joint_randomize(
        &ds,
        &perfect_secrecy_matrix(4).unwrap(),
        &mut column_stream(5, 0),
    )
    .unwrap();
    assert!((report.aggregate_beta - 1.0).abs() < 1e-12);
    let joint: Vec<usize> = out.columns()[0]
        .codes()
        .unwrap()
        .iter()
        .zip(out.columns()[1].codes().unwrap())
        .map(|(a, b)| a * 2 + b)
        .collect();
    for f in frequencies(&joint, 4) {
        assert!((f - 0.25).abs() <= 0.01, "{f}");
    }
}

#[test]
fn joint_kronecker_matches_independent_columns() {
    let ds = binary_pair(40_000);
    let pa = BistochasticMatrix::from_rows(&[[0.8, 0.2], [0.2, 0.8]]).unwrap();
    let pb = BistochasticMatrix::from_rows(&[[0.6, 0.4], [0.4, 0.6]]).unwrap();
    let joint = pa.kronecker(&pb).unwrap();
    let (j, _) = joint_randomize(&ds, &joint, &mut column_stream(8, 0)).unwrap();
    let (s, _) = anonymize_conservative(&ds, &[pa, pb], &[ColumnMode::Sample; 2], 8).unwrap();
    for k in 0..2 {
        let fj = frequencies(j.columns()[k].codes().unwrap(), 2);
        let fs = frequencies(s.columns()[k].codes().unwrap(), 2);
        assert!(
            (fj[0] - fs[0]).abs() <= 0.01,
            "column {k}: {fj:?} vs {fs:?}"
        );
    }
}
