//! Tree searches. Three engines share one candidate collector:
//!
//! * `nn_search` / `knn_search`: exact, tree-ordered descent pruned by the
//!   splitting-plane test.
//! * `approx_knn_search`: the (1+epsilon) engine. Prunes on whole-cell box
//!   distances, updated incrementally one axis at a time, in either
//!   tree-recursive ("standard") or globally nearest-cell-first ("priority")
//!   order. Epsilon 0 degenerates to an exact search.
//!
//! All pruning happens in the squared domain: a cell is skipped when
//! `box_dist2 * (1+eps)^2 >= r_k^2`, which is the squared form of skipping
//! boxes beyond r_k/(1+eps).

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{KdTree, Node};
use crate::geom::{axis_excess, box_dist2, dist2, Neighbor, SquaredDistance};
use crate::{Error, Result};

/// Visit order for the approximate engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchOrder {
    /// Tree-ordered recursion, nearer child first, far children pruned on the
    /// way back up.
    #[default]
    Standard,
    /// Cells visited globally in increasing box-distance order until the
    /// approximation bound stops the scan.
    Priority,
}

/// Knobs for `approx_knn_search`. Epsilon is the allowed relative error in
/// *true* distance: rank-i result within (1+epsilon) of the true rank-i.
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub k: usize,
    pub epsilon: f64,
    pub order: SearchOrder,
}

impl SearchParams {
    /// Exact k-NN: epsilon 0, standard order.
    pub fn exact(k: usize) -> Self {
        Self { k, epsilon: 0.0, order: SearchOrder::Standard }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_order(mut self, order: SearchOrder) -> Self {
        self.order = order;
        self
    }
}

/// Work done by one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Points whose distance to the query was actually computed.
    pub leaf_points_examined: u64,
}

/// Bounded max-heap of the best k candidates seen so far.
struct Collector {
    k: usize,
    heap: BinaryHeap<Candidate>,
}

struct Candidate {
    dist2: f64,
    index: u32,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl Collector {
    fn new(k: usize) -> Self {
        Self { k, heap: BinaryHeap::with_capacity(k + 1) }
    }

    /// Current pruning radius (squared): the k-th best distance once k
    /// candidates exist, infinite before that.
    #[inline]
    fn bound(&self) -> f64 {
        if self.heap.len() == self.k {
            self.heap.peek().map_or(f64::INFINITY, |c| c.dist2)
        } else {
            f64::INFINITY
        }
    }

    #[inline]
    fn offer(&mut self, dist2: f64, index: u32) {
        if self.heap.len() < self.k {
            self.heap.push(Candidate { dist2, index });
        } else if let Some(mut top) = self.heap.peek_mut() {
            if dist2 < top.dist2 {
                *top = Candidate { dist2, index };
            }
        }
    }

    fn into_neighbors(self) -> Vec<Neighbor> {
        self.heap
            .into_sorted_vec()
            .into_iter()
            .map(|c| Neighbor { index: c.index as usize, dist2: SquaredDistance(c.dist2) })
            .collect()
    }
}

/// Priority-queue entry: a cell and its squared box distance to the query.
struct CellEntry {
    rd: f64,
    node: u32,
}

impl Ord for CellEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap, we want the nearest cell on top
        other.rd.total_cmp(&self.rd).then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for CellEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for CellEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CellEntry {}

impl KdTree<'_> {
    /// Exact nearest neighbour. The tree is never empty, so this always
    /// finds one.
    pub fn nn_search(&self, query: &[f64]) -> Result<Neighbor> {
        self.check_query(query)?;
        let mut best = (f64::INFINITY, 0u32);
        self.nn_rec(0, query, &mut best);
        Ok(Neighbor { index: best.1 as usize, dist2: SquaredDistance(best.0) })
    }

    fn nn_rec(&self, node: u32, query: &[f64], best: &mut (f64, u32)) {
        match &self.nodes[node as usize] {
            Node::Leaf(l) => {
                for &i in &self.indices[l.start as usize..(l.start + l.len) as usize] {
                    let d = dist2(query, self.data.point(i as usize));
                    if d < best.0 {
                        *best = (d, i);
                    }
                }
            }
            Node::Split(s) => {
                let cut = query[s.split_dim as usize] - s.split_value;
                let (near, far) = if cut < 0.0 { (node + 1, s.right) } else { (s.right, node + 1) };
                self.nn_rec(near, query, best);
                // A far-side point differs from the query by at least |cut|
                // along this axis alone.
                if cut * cut < best.0 {
                    self.nn_rec(far, query, best);
                }
            }
        }
    }

    /// Exact k nearest, ascending by squared distance. Same plane-test
    /// pruning as `nn_search` with the k-th best distance as the radius
    /// (infinite until k candidates exist).
    pub fn knn_search(&self, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
        self.check_query(query)?;
        self.check_k(k)?;
        let mut out = Collector::new(k);
        self.knn_rec(0, query, &mut out);
        Ok(out.into_neighbors())
    }

    fn knn_rec(&self, node: u32, query: &[f64], out: &mut Collector) {
        match &self.nodes[node as usize] {
            Node::Leaf(l) => {
                for &i in &self.indices[l.start as usize..(l.start + l.len) as usize] {
                    out.offer(dist2(query, self.data.point(i as usize)), i);
                }
            }
            Node::Split(s) => {
                let cut = query[s.split_dim as usize] - s.split_value;
                let (near, far) = if cut < 0.0 { (node + 1, s.right) } else { (s.right, node + 1) };
                self.knn_rec(near, query, out);
                if cut * cut < out.bound() {
                    self.knn_rec(far, query, out);
                }
            }
        }
    }

    /// k approximate nearest neighbours: the rank-i result is within
    /// (1+epsilon) of the true rank-i distance. Epsilon 0 returns exactly
    /// what `knn_search` returns, distance for distance.
    pub fn approx_knn_search(&self, query: &[f64], params: &SearchParams) -> Result<Vec<Neighbor>> {
        self.approx_knn_search_counted(query, params).map(|(hits, _)| hits)
    }

    /// `approx_knn_search`, also reporting how much work the search did.
    pub fn approx_knn_search_counted(
        &self,
        query: &[f64],
        params: &SearchParams,
    ) -> Result<(Vec<Neighbor>, SearchStats)> {
        self.check_query(query)?;
        self.check_k(params.k)?;
        if !params.epsilon.is_finite() || params.epsilon < 0.0 {
            return Err(Error::InvalidEpsilon);
        }
        // Squared form of the (1+eps) guarantee: skip a cell only when
        // box_dist2 * limit >= r_k^2, i.e. the box lies beyond r_k/(1+eps).
        let limit = (1.0 + params.epsilon) * (1.0 + params.epsilon);
        let mut out = Collector::new(params.k);
        let mut stats = SearchStats::default();
        match params.order {
            SearchOrder::Standard => {
                // Per-axis offsets from the query to the root cell, kept in
                // sync down the recursion so cell distances update axis-wise.
                let mut off: Vec<f64> = (0..query.len())
                    .map(|i| axis_excess(self.bounds.low()[i], self.bounds.high()[i], query[i]))
                    .collect();
                let rd: f64 = off.iter().map(|o| o * o).sum();
                self.approx_rec(0, query, rd, &mut off, limit, &mut out, &mut stats);
            }
            SearchOrder::Priority => self.approx_priority(query, limit, &mut out, &mut stats),
        }
        Ok((out.into_neighbors(), stats))
    }

    #[allow(clippy::too_many_arguments)]
    fn approx_rec(
        &self,
        node: u32,
        query: &[f64],
        rd: f64,
        off: &mut [f64],
        limit: f64,
        out: &mut Collector,
        stats: &mut SearchStats,
    ) {
        match &self.nodes[node as usize] {
            Node::Leaf(l) => {
                stats.leaf_points_examined += l.len as u64;
                for &i in &self.indices[l.start as usize..(l.start + l.len) as usize] {
                    out.offer(dist2(query, self.data.point(i as usize)), i);
                }
            }
            Node::Split(s) => {
                let dim = s.split_dim as usize;
                let cut = query[dim] - s.split_value;
                let (near, far) = if cut < 0.0 { (node + 1, s.right) } else { (s.right, node + 1) };
                self.approx_rec(near, query, rd, off, limit, out, stats);
                // The far child's cell keeps every offset of the current
                // cell except along the split axis, where it becomes |cut|.
                let old = off[dim];
                let far_rd = rd - old * old + cut * cut;
                if far_rd * limit < out.bound() {
                    off[dim] = cut;
                    self.approx_rec(far, query, far_rd, off, limit, out, stats);
                    off[dim] = old;
                }
            }
        }
    }

    fn approx_priority(
        &self,
        query: &[f64],
        limit: f64,
        out: &mut Collector,
        stats: &mut SearchStats,
    ) {
        let mut queue: BinaryHeap<CellEntry> = BinaryHeap::new();
        queue.push(CellEntry {
            rd: box_dist2(self.bounds.low(), self.bounds.high(), query),
            node: 0,
        });
        while let Some(cell) = queue.pop() {
            // Cells come out nearest first, so the first useless one ends it.
            if cell.rd * limit >= out.bound() {
                break;
            }
            match &self.nodes[cell.node as usize] {
                Node::Leaf(l) => {
                    stats.leaf_points_examined += l.len as u64;
                    for &i in &self.indices[l.start as usize..(l.start + l.len) as usize] {
                        out.offer(dist2(query, self.data.point(i as usize)), i);
                    }
                }
                Node::Split(s) => {
                    let dim = s.split_dim as usize;
                    let cut = query[dim] - s.split_value;
                    let old = axis_excess(s.cell_low, s.cell_high, query[dim]);
                    let far_rd = cell.rd - old * old + cut * cut;
                    let (near, far) =
                        if cut < 0.0 { (cell.node + 1, s.right) } else { (s.right, cell.node + 1) };
                    queue.push(CellEntry { rd: cell.rd, node: near });
                    queue.push(CellEntry { rd: far_rd, node: far });
                }
            }
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < 1 || k > self.data.len() {
            return Err(Error::InvalidK { k, max: self.data.len() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{brute_knn, Dataset};

    fn dataset(rows: &[&[f64]]) -> Dataset {
        let dim = rows[0].len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Dataset::from_flat(flat, dim).unwrap()
    }

    #[test]
    fn nn_finds_indexed_points_exactly() {
        let data = dataset(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[2.0, 2.0], &[5.0, 5.0]]);
        let tree = KdTree::build(&data, 2).unwrap();
        for i in 0..data.len() {
            let hit = tree.nn_search(data.point(i)).unwrap();
            assert_eq!(hit.dist2.value(), 0.0, "point {i} should be its own neighbour");
        }
    }

    #[test]
    fn nn_on_singleton() {
        let data = dataset(&[&[3.0, 4.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        let hit = tree.nn_search(&[0.0, 0.0]).unwrap();
        assert_eq!(hit.index, 0);
        assert_eq!(hit.dist2.value(), 25.0);
    }

    #[test]
    fn knn_k1_matches_nn_distance() {
        let data = dataset(&[&[0.0, 0.0], &[1.0, 0.0], &[0.3, 0.7], &[2.0, 2.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        for q in [[0.2, 0.1], [1.5, 1.5], [-3.0, 0.4]] {
            let nn = tree.nn_search(&q).unwrap();
            let knn = tree.knn_search(&q, 1).unwrap();
            assert_eq!(knn.len(), 1);
            assert_eq!(knn[0].dist2, nn.dist2);
        }
    }

    #[test]
    fn knn_k_equals_n_is_fully_sorted() {
        let data = dataset(&[&[3.0], &[1.0], &[2.0], &[9.0]]);
        let tree = KdTree::build(&data, 2).unwrap();
        let hits = tree.knn_search(&[0.0], 4).unwrap();
        let d: Vec<f64> = hits.iter().map(|h| h.dist2.value()).collect();
        assert_eq!(d, [1.0, 4.0, 9.0, 81.0]);
    }

    #[test]
    fn knn_matches_brute_on_a_small_grid() {
        let data = dataset(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[0.0, 1.0],
            &[1.0, 1.0],
            &[0.5, 0.5],
            &[2.0, 0.5],
        ]);
        let tree = KdTree::build(&data, 2).unwrap();
        for q in [[0.1, 0.2], [0.9, 0.9], [5.0, -1.0]] {
            for k in 1..=data.len() {
                let ours: Vec<f64> = tree
                    .knn_search(&q, k)
                    .unwrap()
                    .iter()
                    .map(|h| h.dist2.value())
                    .collect();
                let truth: Vec<f64> = brute_knn(&data, &q, k)
                    .unwrap()
                    .iter()
                    .map(|h| h.dist2.value())
                    .collect();
                assert_eq!(ours, truth, "k={k} q={q:?}");
            }
        }
    }

    #[test]
    fn epsilon_zero_equals_exact_in_both_orders() {
        let data = dataset(&[
            &[0.2, 0.4],
            &[0.9, 0.1],
            &[0.5, 0.5],
            &[0.1, 0.8],
            &[0.7, 0.7],
            &[0.3, 0.2],
            &[0.8, 0.9],
        ]);
        let tree = KdTree::build(&data, 2).unwrap();
        let q = [0.45, 0.55];
        for k in 1..=7 {
            let exact: Vec<f64> =
                tree.knn_search(&q, k).unwrap().iter().map(|h| h.dist2.value()).collect();
            for order in [SearchOrder::Standard, SearchOrder::Priority] {
                let params = SearchParams::exact(k).with_order(order);
                let approx: Vec<f64> = tree
                    .approx_knn_search(&q, &params)
                    .unwrap()
                    .iter()
                    .map(|h| h.dist2.value())
                    .collect();
                assert_eq!(approx, exact, "k={k} order={order:?}");
            }
        }
    }

    #[test]
    fn far_query_still_returns_all_requested() {
        let data = dataset(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        let params = SearchParams::exact(2).with_epsilon(1.0);
        let hits = tree.approx_knn_search(&[1000.0, 1000.0], &params).unwrap();
        assert_eq!(hits.len(), 2);
        let mut idx: Vec<usize> = hits.iter().map(|h| h.index).collect();
        idx.sort_unstable();
        assert_eq!(idx, [0, 1]);
    }

    #[test]
    fn counted_search_reports_work() {
        let data = dataset(&[&[0.0], &[1.0], &[2.0], &[3.0], &[4.0], &[5.0], &[6.0], &[7.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        let (hits, stats) =
            tree.approx_knn_search_counted(&[0.1], &SearchParams::exact(1)).unwrap();
        assert_eq!(hits[0].index, 0);
        assert!(stats.leaf_points_examined >= 1);
        assert!(stats.leaf_points_examined <= 8);
    }

    #[test]
    fn search_parameter_guards() {
        let data = dataset(&[&[0.0], &[1.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        assert_eq!(tree.knn_search(&[0.0], 0).unwrap_err(), Error::InvalidK { k: 0, max: 2 });
        assert_eq!(tree.knn_search(&[0.0], 3).unwrap_err(), Error::InvalidK { k: 3, max: 2 });
        assert_eq!(
            tree.nn_search(&[0.0, 0.0]).unwrap_err(),
            Error::DimensionMismatch { expected: 1, found: 2 }
        );
        let bad = SearchParams::exact(1).with_epsilon(-0.5);
        assert_eq!(tree.approx_knn_search(&[0.0], &bad).unwrap_err(), Error::InvalidEpsilon);
        let nan = SearchParams::exact(1).with_epsilon(f64::NAN);
        assert_eq!(tree.approx_knn_search(&[0.0], &nan).unwrap_err(), Error::InvalidEpsilon);
    }

    #[test]
    fn duplicate_points_all_reachable() {
        let data = dataset(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0], &[2.0, 2.0]]);
        let tree = KdTree::build(&data, 1).unwrap();
        let hits = tree.knn_search(&[1.0, 1.0], 3).unwrap();
        assert!(hits.iter().all(|h| h.dist2.value() == 0.0));
        let mut idx: Vec<usize> = hits.iter().map(|h| h.index).collect();
        idx.sort_unstable();
        assert_eq!(idx, [0, 1, 2]);
    }
}
