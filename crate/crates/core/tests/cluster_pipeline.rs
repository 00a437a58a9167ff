//! The tree-backed clustering pipeline against an independent exhaustive
//! reimplementation, plus order-theoretic properties of its knobs.

mod common;

use common::{two_groups, uniform};
use nnkit_core::{brute_knn_join, cluster, ClusterParams, Dataset, Linkage};
use std::collections::BTreeSet;

/// Exhaustive re-derivation of the whole pipeline, sharing no code with the
/// implementation under test: full kNN join, arc filtering, component labels
/// in scan order.
fn exhaustive_labels(
    data: &Dataset,
    k: usize,
    threshold: Option<f64>,
    linkage: Linkage,
) -> Vec<usize> {
    let n = data.len();
    let rows = brute_knn_join(data, k).unwrap();

    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        for hit in row {
            let keep = match threshold {
                Some(t) => hit.dist2.value() <= t * t,
                None => true,
            };
            if keep {
                arcs.insert((i, hit.index));
            }
        }
    }

    let mut adjacency = vec![Vec::new(); n];
    for &(i, j) in &arcs {
        let connected = match linkage {
            Linkage::Unilateral => true,
            Linkage::Mutual => arcs.contains(&(j, i)),
        };
        if connected {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }

    let mut labels = vec![usize::MAX; n];
    let mut next = 0usize;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let mut queue = vec![start];
        labels[start] = next;
        while let Some(v) = queue.pop() {
            for &w in &adjacency[v] {
                if labels[w] == usize::MAX {
                    labels[w] = next;
                    queue.push(w);
                }
            }
        }
        next += 1;
    }
    labels
}

#[test]
fn tree_pipeline_matches_exhaustive_pipeline() {
    for seed in 0..6u64 {
        let data = uniform(80 + 17 * seed as usize, 2, 600 + seed);
        for k in [1usize, 2, 3] {
            for linkage in [Linkage::Unilateral, Linkage::Mutual] {
                for threshold in [None, Some(8.0), Some(25.0)] {
                    let mut params =
                        ClusterParams::new(k).with_linkage(linkage);
                    if let Some(t) = threshold {
                        params = params.with_threshold(t);
                    }
                    let got = cluster(&data, &params).unwrap();
                    let want = exhaustive_labels(&data, k, threshold, linkage);
                    assert_eq!(
                        got.labels(),
                        &want[..],
                        "seed={seed} k={k} linkage={linkage:?} threshold={threshold:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn tree_pipeline_matches_exhaustive_on_grouped_data() {
    let data = two_groups(90, 3, 400.0, 5.0, 11);
    for k in [2usize, 4] {
        let params = ClusterParams::new(k).with_threshold(20.0);
        let got = cluster(&data, &params).unwrap();
        let want = exhaustive_labels(&data, k, Some(20.0), Linkage::Unilateral);
        assert_eq!(got.labels(), &want[..], "k={k}");
    }
}

/// `a` refines `b` when every cluster of `a` sits inside one cluster of `b`.
fn refines(a: &[usize], b: &[usize]) -> bool {
    let mut target = std::collections::BTreeMap::new();
    for i in 0..a.len() {
        match target.get(&a[i]) {
            None => {
                target.insert(a[i], b[i]);
            }
            Some(&t) if t == b[i] => {}
            Some(_) => return false,
        }
    }
    true
}

#[test]
fn tighter_thresholds_refine_the_partition() {
    let data = uniform(150, 2, 77);
    let mut previous: Option<Vec<usize>> = None;
    for threshold in [3.0, 6.0, 12.0, 24.0] {
        let params = ClusterParams::new(3).with_threshold(threshold);
        let labels = cluster(&data, &params).unwrap().labels().to_vec();
        if let Some(tighter) = &previous {
            assert!(
                refines(tighter, &labels),
                "threshold {threshold} did not coarsen the previous partition"
            );
        }
        previous = Some(labels);
    }
}

#[test]
fn mutual_linkage_refines_unilateral() {
    for seed in [5u64, 6, 7] {
        let data = uniform(120, 2, 900 + seed);
        for k in [1usize, 3] {
            let uni = cluster(&data, &ClusterParams::new(k)).unwrap();
            let mutual = cluster(
                &data,
                &ClusterParams::new(k).with_linkage(Linkage::Mutual),
            )
            .unwrap();
            assert!(
                refines(mutual.labels(), uni.labels()),
                "seed={seed} k={k}: mutual linkage coarser than unilateral"
            );
            assert!(mutual.cluster_count() >= uni.cluster_count());
        }
    }
}

#[test]
fn partition_ignores_input_order_when_distances_are_tie_free() {
    let data = uniform(100, 2, 321);
    let n = data.len();
    let mut flat = Vec::with_capacity(n * 2);
    for i in (0..n).rev() {
        flat.extend_from_slice(data.point(i));
    }
    let reversed = Dataset::from_flat(flat, 2).unwrap();

    let params = ClusterParams::new(2).with_threshold(15.0);
    let fwd = cluster(&data, &params).unwrap();
    let bwd = cluster(&reversed, &params).unwrap();

    assert_eq!(fwd.cluster_count(), bwd.cluster_count());
    for i in 0..n {
        for j in (i + 1)..n {
            let together_fwd = fwd.labels()[i] == fwd.labels()[j];
            let together_bwd = bwd.labels()[n - 1 - i] == bwd.labels()[n - 1 - j];
            assert_eq!(together_fwd, together_bwd, "points {i} and {j} disagree");
        }
    }
}
