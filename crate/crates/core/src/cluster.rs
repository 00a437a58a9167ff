//! Spatial clustering: link each point to its k approximate nearest others,
//! then read the clusters off as connected components of that graph.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::geom::{Neighbor, SquaredDistance};
use crate::kdtree::{KdTree, SearchParams, DEFAULT_BUCKET_SIZE};
use crate::{Dataset, Error, Result};

/// How directed kNN arcs become undirected edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Linkage {
    /// Edge only when both endpoints list each other.
    Mutual,
    /// Edge when either endpoint lists the other.
    #[default]
    Unilateral,
}

/// Clustering knobs. `dist_threshold` caps edge length in *true* (unsquared)
/// distance; `None` keeps every arc the searches produce.
#[derive(Clone, Copy, Debug)]
pub struct ClusterParams {
    pub k: usize,
    pub epsilon: f64,
    pub dist_threshold: Option<f64>,
    pub linkage: Linkage,
}

impl ClusterParams {
    pub fn new(k: usize) -> Self {
        Self { k, epsilon: 0.0, dist_threshold: None, linkage: Linkage::Unilateral }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_threshold(mut self, dist_threshold: f64) -> Self {
        self.dist_threshold = Some(dist_threshold);
        self
    }

    pub fn with_linkage(mut self, linkage: Linkage) -> Self {
        self.linkage = linkage;
        self
    }
}

/// Undirected edge with the squared distance between its endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub dist2: SquaredDistance,
}

/// Undirected kNN graph over point indices 0..n. Edges are stored once,
/// `a < b`, in ascending order.
#[derive(Clone, Debug)]
pub struct KnnGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl KnnGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Cluster assignment. Labels run 0..cluster_count and are canonical: cluster
/// c's smallest member index is the c-th smallest such minimum overall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    labels: Vec<usize>,
    cluster_count: usize,
}

impl ClusterLabeling {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Builds the kNN graph: each point contributes arcs to its k approximate
/// nearest *other* points (found with `k+1` and its own index dropped), the
/// threshold trims long arcs, and the linkage rule merges arcs into edges.
///
/// `index` must be the tree built over `points` itself, not a copy.
pub fn build_knn_graph(
    points: &Dataset,
    params: &ClusterParams,
    index: &KdTree<'_>,
) -> Result<KnnGraph> {
    if !core::ptr::eq(index.dataset(), points) {
        return Err(Error::DatasetMismatch);
    }
    let n = points.len();
    if params.k < 1 || params.k >= n {
        return Err(Error::InvalidK { k: params.k, max: n.saturating_sub(1) });
    }
    if let Some(t) = params.dist_threshold {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidThreshold);
        }
    }
    let limit2 = params.dist_threshold.map(|t| t * t);
    let search = SearchParams::exact(params.k + 1).with_epsilon(params.epsilon);

    let mut arcs: Vec<(u32, u32, f64)> = Vec::with_capacity(n * params.k);
    let mut others: Vec<Neighbor> = Vec::with_capacity(params.k);
    for i in 0..n {
        let hits = index.approx_knn_search(points.point(i), &search)?;
        others.clear();
        others.extend(hits.into_iter().filter(|h| h.index != i).take(params.k));
        for h in &others {
            // hits come back ascending, so the first over-long arc ends the row
            if let Some(l2) = limit2 {
                if h.dist2.value() > l2 {
                    break;
                }
            }
            arcs.push((i as u32, h.index as u32, h.dist2.value()));
        }
    }

    let mut edges: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    match params.linkage {
        Linkage::Unilateral => {
            for &(i, j, d2) in &arcs {
                edges.entry((i.min(j), i.max(j))).or_insert(d2);
            }
        }
        Linkage::Mutual => {
            let arc_set: BTreeSet<(u32, u32)> = arcs.iter().map(|&(i, j, _)| (i, j)).collect();
            for &(i, j, d2) in &arcs {
                if arc_set.contains(&(j, i)) {
                    edges.entry((i.min(j), i.max(j))).or_insert(d2);
                }
            }
        }
    }

    Ok(KnnGraph {
        n,
        edges: edges
            .into_iter()
            .map(|((a, b), d2)| Edge { a: a as usize, b: b as usize, dist2: SquaredDistance(d2) })
            .collect(),
    })
}

/// Labels each point with its connected component. Scanning points in index
/// order makes the numbering canonical by smallest member index.
pub fn connected_components(graph: &KnnGraph) -> ClusterLabeling {
    let n = graph.n;
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in &graph.edges {
        adjacency[e.a].push(e.b as u32);
        adjacency[e.b].push(e.a as u32);
    }
    const UNSEEN: usize = usize::MAX;
    let mut labels = vec![UNSEEN; n];
    let mut cluster_count = 0;
    let mut stack: Vec<u32> = Vec::new();
    for start in 0..n {
        if labels[start] != UNSEEN {
            continue;
        }
        labels[start] = cluster_count;
        stack.push(start as u32);
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v as usize] {
                if labels[w as usize] == UNSEEN {
                    labels[w as usize] = cluster_count;
                    stack.push(w);
                }
            }
        }
        cluster_count += 1;
    }
    ClusterLabeling { labels, cluster_count }
}

/// The whole pipeline: index the points, build the approximate kNN graph,
/// label its components.
pub fn cluster(points: &Dataset, params: &ClusterParams) -> Result<ClusterLabeling> {
    let tree = KdTree::build(points, DEFAULT_BUCKET_SIZE)?;
    let graph = build_knn_graph(points, params, &tree)?;
    Ok(connected_components(&graph))
}
