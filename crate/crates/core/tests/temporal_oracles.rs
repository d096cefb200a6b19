use animlens_core::anim::PoseFeature;
use animlens_core::temporal::{dba_average, dtw, DbaParams};
use proptest::prelude::*;

fn euclid(a: &PoseFeature, b: &PoseFeature) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Cheapest monotone, continuous path from (0,0) to the end by enumerating
/// every path. Costs accumulate from the start like the DP does.
fn brute_force(a: &[PoseFeature], b: &[PoseFeature]) -> f64 {
    fn walk(a: &[PoseFeature], b: &[PoseFeature], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + euclid(&a[i], &b[j]);
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

fn seq(max_len: usize, dim: usize) -> impl Strategy<Value = Vec<PoseFeature>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim).prop_map(PoseFeature), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dtw_equals_enumeration((a, b) in (1usize..4).prop_flat_map(|d| (seq(7, d), seq(7, d)))) {
        let got = dtw(&a, &b).unwrap();
        prop_assert_eq!(got.cost, brute_force(&a, &b));
        let path_cost: f64 = got.path.iter().map(|&(i, j)| euclid(&a[i], &b[j])).sum();
        prop_assert!((path_cost - got.cost).abs() <= 1e-9 * (1.0 + got.cost));
    }

    #[test]
    fn dtw_self_zero_and_symmetric((a, b) in (1usize..4).prop_flat_map(|d| (seq(12, d), seq(12, d)))) {
        prop_assert_eq!(dtw(&a, &a).unwrap().cost, 0.0);
        let ab = dtw(&a, &b).unwrap().cost;
        let ba = dtw(&b, &a).unwrap().cost;
        prop_assert!((ab - ba).abs() <= 1e-9 * (1.0 + ab));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn dba_cost_never_increases(
        sets in (1usize..4).prop_flat_map(|d| prop::collection::vec(seq(12, d), 2..6)),
        seed in any::<u64>(),
    ) {
        let out = dba_average(&sets, seed, DbaParams::default()).unwrap();
        for w in out.costs.windows(2) {
            prop_assert!(w[1] <= w[0], "cost rose from {} to {}", w[0], w[1]);
        }
    }
}

#[test]
fn dba_of_identical_sequences_is_that_sequence() {
    let clip: Vec<PoseFeature> = (0..9).map(|t| PoseFeature(vec![t as f64, (t as f64).sin(), -1.0])).collect();
    for m in [1, 2, 5] {
        let out = dba_average(&vec![clip.clone(); m], 7, DbaParams::default()).unwrap();
        assert_eq!(out.average.len(), clip.len());
        for (x, y) in out.average.iter().zip(&clip) {
            assert!(euclid(x, y) <= 1e-9);
        }
    }
}

#[test]
fn dba_of_two_constants_is_midpoint() {
    let a = vec![PoseFeature(vec![0.0, 2.0]); 6];
    let b = vec![PoseFeature(vec![4.0, -2.0]); 6];
    let out = dba_average(&[a, b], 0, DbaParams::default()).unwrap();
    for p in &out.average {
        assert!(euclid(p, &PoseFeature(vec![2.0, 0.0])) <= 1e-9);
    }
}
