//! Cross-checks between the tree searches and the exhaustive baseline.
//!
//! The baseline computes every distance and selects the k smallest; the tree
//! routes share nothing with it beyond the squared-distance kernel, so
//! agreement here is meaningful.

mod common;

use common::{queries, two_groups, uniform};
use nnkit_core::{brute_knn, KdTree, Neighbor, SearchOrder, SearchParams};

/// Bitwise comparison: same indices in the same order, same distance bits.
fn assert_same_hits(want: &[Neighbor], got: &[Neighbor], context: &str) {
    assert_eq!(want.len(), got.len(), "{context}: result lengths differ");
    for (rank, (w, g)) in want.iter().zip(got).enumerate() {
        assert_eq!(
            w.dist2.value().to_bits(),
            g.dist2.value().to_bits(),
            "{context}: distance at rank {rank} differs"
        );
        assert_eq!(w.index, g.index, "{context}: index at rank {rank} differs");
    }
}

#[test]
fn exact_knn_matches_brute_bitwise() {
    for (instance, (n, dim, bucket)) in
        [(57usize, 2usize, 1usize), (200, 2, 8), (333, 3, 4), (512, 3, 16), (64, 4, 8)]
            .into_iter()
            .enumerate()
    {
        let data = uniform(n, dim, 1000 + instance as u64);
        let tree = KdTree::build(&data, bucket).unwrap();
        for (qi, q) in queries(15, dim, 77 + instance as u64).iter().enumerate() {
            for k in 1..=5.min(n) {
                let want = brute_knn(&data, q, k).unwrap();
                let got = tree.knn_search(q, k).unwrap();
                assert_same_hits(&want, &got, &format!("n={n} dim={dim} q={qi} k={k}"));
            }
        }
    }
}

#[test]
fn exact_knn_matches_brute_on_grouped_data() {
    for seed in 0..8u64 {
        let data = two_groups(120, 2, 500.0, 3.0, seed);
        let tree = KdTree::build(&data, 8).unwrap();
        for q in queries(10, 2, seed) {
            let want = brute_knn(&data, &q, 4).unwrap();
            let got = tree.knn_search(&q, 4).unwrap();
            assert_same_hits(&want, &got, &format!("grouped seed={seed}"));
        }
    }
}

#[test]
fn nn_matches_brute_rank_one() {
    let data = uniform(400, 3, 9);
    let tree = KdTree::build(&data, 8).unwrap();
    for q in queries(40, 3, 9) {
        let want = brute_knn(&data, &q, 1).unwrap()[0];
        let got = tree.nn_search(&q).unwrap();
        assert_eq!(want.dist2.value().to_bits(), got.dist2.value().to_bits());
        assert_eq!(want.index, got.index);
    }
}

#[test]
fn approx_with_zero_epsilon_is_the_exact_search() {
    for (instance, (n, dim, bucket)) in
        [(57usize, 2usize, 1usize), (200, 2, 8), (333, 3, 4)].into_iter().enumerate()
    {
        let data = uniform(n, dim, 1000 + instance as u64);
        let tree = KdTree::build(&data, bucket).unwrap();
        for q in queries(15, dim, 77 + instance as u64) {
            for k in [1, 3, 5] {
                let want = tree.knn_search(&q, k).unwrap();
                for order in [SearchOrder::Standard, SearchOrder::Priority] {
                    let params = SearchParams::exact(k).with_order(order);
                    let got = tree.approx_knn_search(&q, &params).unwrap();
                    assert_same_hits(&want, &got, &format!("order={order:?} k={k}"));
                }
            }
        }
    }
}

/// The guarantee under `epsilon`: the rank-i result is within a factor
/// `(1 + epsilon)` of the true rank-i distance — in true (root) distance, so
/// the squared comparison uses `(1 + epsilon)^2`.
#[test]
fn approx_results_respect_the_epsilon_bound() {
    for seed in 0..10u64 {
        let data = uniform(300, 2, 4000 + seed);
        let tree = KdTree::build(&data, 8).unwrap();
        for q in queries(10, 2, seed) {
            let truth = brute_knn(&data, &q, 6).unwrap();
            for epsilon in [0.1, 0.5, 1.0, 2.0] {
                for order in [SearchOrder::Standard, SearchOrder::Priority] {
                    let params =
                        SearchParams::exact(6).with_epsilon(epsilon).with_order(order);
                    let got = tree.approx_knn_search(&q, &params).unwrap();
                    assert_eq!(got.len(), 6);
                    for (rank, hit) in got.iter().enumerate() {
                        // the guarantee is stated in true distance, so the
                        // comparison takes roots; no tolerance
                        let allowed = (1.0 + epsilon) * truth[rank].dist2.value().sqrt();
                        assert!(
                            hit.dist2.value().sqrt() <= allowed,
                            "seed={seed} eps={epsilon} order={order:?} rank={rank}: \
                             got {} > allowed {allowed}",
                            hit.dist2.value().sqrt()
                        );
                    }
                    // results must be sorted and distinct
                    for pair in got.windows(2) {
                        assert!(pair[0].dist2.value() <= pair[1].dist2.value());
                        assert_ne!(pair[0].index, pair[1].index);
                    }
                }
            }
        }
    }
}

/// Looser epsilon may only reduce the leaf work, never increase it, on the
/// same tree and query set.
#[test]
fn leaf_work_shrinks_as_epsilon_grows() {
    let data = uniform(2000, 2, 31);
    let tree = KdTree::build(&data, 8).unwrap();
    let qs = queries(50, 2, 31);
    for order in [SearchOrder::Standard, SearchOrder::Priority] {
        let mut previous = u64::MAX;
        for epsilon in [0.0, 0.5, 1.0, 2.0] {
            let params = SearchParams::exact(5).with_epsilon(epsilon).with_order(order);
            let mut examined = 0u64;
            for q in &qs {
                let (_, stats) = tree.approx_knn_search_counted(q, &params).unwrap();
                examined += stats.leaf_points_examined;
            }
            assert!(
                examined <= previous,
                "order={order:?} eps={epsilon}: examined {examined} > previous {previous}"
            );
            previous = examined;
        }
    }
}
