use proptest::prelude::*;
use selectlab_core::experiments::ks_two_sample;
use selectlab_core::limit::{kernel_cdf, kernel_support_end};
use selectlab_core::quickselect::{hoare_partition, quickselect, KeyArray};
use selectlab_core::rng::stream_rng;
use selectlab_core::sampler::{cdf_g, multigamma_update, quantile_g_inv};

proptest! {
    #[test]
    fn residual_quantile_inverts_residual_cdf(x in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let t = t * kernel_support_end(x);
        let back = quantile_g_inv(x, cdf_g(x, t)).unwrap();
        prop_assert!((back - t).abs() < 1e-9, "x = {x}, t = {t}, back = {back}");
    }

    #[test]
    fn residual_quantile_is_monotone(x in 0.0f64..=1.0, u in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        prop_assert!(quantile_g_inv(x, lo).unwrap() <= quantile_g_inv(x, hi).unwrap() + 1e-12);
    }

    #[test]
    fn kernel_cdf_is_a_distribution_function(x in 0.0f64..=1.0, s in 0.0f64..=1.2, t in 0.0f64..=1.2) {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let (a, b) = (kernel_cdf(x, lo), kernel_cdf(x, hi));
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(a <= b + 1e-15);
    }

    #[test]
    fn updates_stay_in_the_support(x in 0.0f64..=1.0, coalesce: bool, u in 0.0f64..1.0) {
        let y = multigamma_update(x, coalesce, u).unwrap();
        prop_assert!(y >= 0.0 && y <= kernel_support_end(x).max(0.25));
    }

    #[test]
    fn partition_splits_into_ordered_halves(seed: u64, n in 2usize..300) {
        let mut rng = stream_rng(seed, 0);
        let mut keys = KeyArray::random_permutation(n, &mut rng).unwrap().into_inner();
        let before = keys.clone();
        let outcome = hoare_partition(&mut keys).unwrap();
        prop_assert!((1..n).contains(&outcome.split_index));
        prop_assert!(outcome.swaps <= (n / 2) as u64);
        let (left, right) = keys.split_at(outcome.split_index);
        prop_assert!(left.iter().max() < right.iter().min());
        // The left part holds exactly the smallest keys.
        prop_assert_eq!(*left.iter().max().unwrap() as usize, outcome.split_index);
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        let mut original = before;
        original.sort_unstable();
        prop_assert_eq!(sorted, original);
    }

    #[test]
    fn selection_is_correct_and_exchanges_are_bounded(seed: u64, n in 1usize..200, rank_seed: usize) {
        let mut rng = stream_rng(seed, 1);
        let mut keys = KeyArray::random_permutation(n, &mut rng).unwrap().into_inner();
        let rank = rank_seed % n + 1;
        let run = quickselect(&mut keys, rank).unwrap();
        prop_assert_eq!(run.selected_value as usize, rank);
        // Each pass swaps at most half of a segment that shrinks by at least one.
        prop_assert!(run.exchanges <= (n * n / 4 + n) as u64);
    }

    #[test]
    fn two_sample_statistic_is_symmetric(
        a in proptest::collection::vec(0.0f64..1.0, 1..50),
        b in proptest::collection::vec(0.0f64..1.0, 1..50),
    ) {
        let d = ks_two_sample(a.clone(), b.clone());
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_two_sample(b, a));
    }
}
