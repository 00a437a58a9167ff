//! Median-split k-d tree: exact nearest-neighbour, exact k-NN, and
//! epsilon-approximate k-NN over a borrowed dataset.

mod search;

pub use search::{SearchOrder, SearchParams, SearchStats};

use alloc::vec::Vec;

use crate::geom::AxisBox;
use crate::{Dataset, Error, Result};

/// Leaf capacity used when callers do not care.
pub const DEFAULT_BUCKET_SIZE: usize = 8;

/// Immutable spatial index over a borrowed dataset.
///
/// Built by recursive lower-median splits on the cycling axis (level mod d).
/// Points equal to the median value may land on either side; enough go left
/// to keep the two halves within one point of each other. Splitting stops
/// when a subset fits in `bucket_size`.
pub struct KdTree<'a> {
    data: &'a Dataset,
    nodes: Vec<Node>,
    indices: Vec<u32>,
    bounds: AxisBox,
    bucket_size: usize,
    depth: usize,
    leaf_count: usize,
}

enum Node {
    Split(SplitNode),
    Leaf(LeafNode),
}

/// Interior node. The left child sits at `own index + 1` in the node arena;
/// `right` is explicit. `cell_low`/`cell_high` are the node's cell bounds
/// along `split_dim`, kept so a search can update box distances one axis at
/// a time even when it jumps around the tree.
struct SplitNode {
    split_dim: u32,
    right: u32,
    split_value: f64,
    cell_low: f64,
    cell_high: f64,
}

/// Contiguous run of `indices`.
struct LeafNode {
    start: u32,
    len: u32,
}

/// Handle to a node inside its tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeId(u32);

/// Read-only projection of one node, for walking the structure.
#[derive(Clone, Copy, Debug)]
pub enum NodeView<'t> {
    Split { split_dim: usize, split_value: f64, left: NodeId, right: NodeId },
    Leaf { point_indices: &'t [u32] },
}

/// Structural counters. `depth` counts nodes on the longest root-to-leaf
/// path, so a single-leaf tree has depth 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeStats {
    pub node_count: usize,
    pub leaf_count: usize,
    pub depth: usize,
    pub bucket_size: usize,
}

impl<'a> KdTree<'a> {
    /// Indexes `data`. The dataset must outlive the tree and stay put; the
    /// tree stores indices, never coordinates.
    pub fn build(data: &'a Dataset, bucket_size: usize) -> Result<Self> {
        if bucket_size < 1 {
            return Err(Error::InvalidBucketSize);
        }
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        assert!(data.len() <= u32::MAX as usize, "dataset too large for u32 indices");
        let bounds = AxisBox::enclosing(data)?;
        let mut builder = Builder {
            data,
            nodes: Vec::new(),
            indices: (0..data.len() as u32).collect(),
            bucket_size,
            max_level: 0,
            leaf_count: 0,
            cell_low: bounds.low().to_vec(),
            cell_high: bounds.high().to_vec(),
        };
        builder.build_range(0, data.len(), 0);
        Ok(KdTree {
            data,
            nodes: builder.nodes,
            indices: builder.indices,
            bounds,
            bucket_size,
            depth: builder.max_level + 1,
            leaf_count: builder.leaf_count,
        })
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> NodeView<'_> {
        match &self.nodes[id.0 as usize] {
            Node::Split(s) => NodeView::Split {
                split_dim: s.split_dim as usize,
                split_value: s.split_value,
                left: NodeId(id.0 + 1),
                right: NodeId(s.right),
            },
            Node::Leaf(l) => NodeView::Leaf {
                point_indices: &self.indices[l.start as usize..(l.start + l.len) as usize],
            },
        }
    }

    /// Tight bounding box of the indexed points.
    pub fn bounds(&self) -> &AxisBox {
        &self.bounds
    }

    pub fn bucket_size(&self) -> usize {
        self.bucket_size
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.data
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            node_count: self.nodes.len(),
            leaf_count: self.leaf_count,
            depth: self.depth,
            bucket_size: self.bucket_size,
        }
    }

    fn check_query(&self, query: &[f64]) -> Result<()> {
        if query.len() != self.data.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.data.dim(),
                found: query.len(),
            });
        }
        Ok(())
    }
}

struct Builder<'a> {
    data: &'a Dataset,
    nodes: Vec<Node>,
    indices: Vec<u32>,
    bucket_size: usize,
    max_level: usize,
    leaf_count: usize,
    cell_low: Vec<f64>,
    cell_high: Vec<f64>,
}

impl Builder<'_> {
    /// Builds the subtree over `indices[lo..hi]`, returning its node id.
    /// `level` is 0 at the root; recursion depth therefore tracks tree depth.
    fn build_range(&mut self, lo: usize, hi: usize, level: usize) -> u32 {
        let id = self.nodes.len() as u32;
        let len = hi - lo;
        if level > self.max_level {
            self.max_level = level;
        }
        if len <= self.bucket_size {
            self.leaf_count += 1;
            self.nodes.push(Node::Leaf(LeafNode { start: lo as u32, len: len as u32 }));
            return id;
        }

        let dim = level % self.data.dim();
        let mid = lo + len / 2;
        let data = self.data;
        // Lower median: after this, [lo..mid] <= indices[mid] <= [mid..hi]
        // along `dim`, with the halves differing in size by at most one.
        self.indices[lo..hi].select_nth_unstable_by(len / 2, |&a, &b| {
            data.point(a as usize)[dim].total_cmp(&data.point(b as usize)[dim])
        });
        let split_value = data.point(self.indices[mid] as usize)[dim];

        let (saved_low, saved_high) = (self.cell_low[dim], self.cell_high[dim]);
        self.nodes.push(Node::Split(SplitNode {
            split_dim: dim as u32,
            right: 0, // patched below
            split_value,
            cell_low: saved_low,
            cell_high: saved_high,
        }));

        self.cell_high[dim] = split_value;
        self.build_range(lo, mid, level + 1); // left lands at id + 1
        self.cell_high[dim] = saved_high;

        self.cell_low[dim] = split_value;
        let right = self.build_range(mid, hi, level + 1);
        self.cell_low[dim] = saved_low;

        match &mut self.nodes[id as usize] {
            Node::Split(s) => s.right = right,
            Node::Leaf(_) => unreachable!(),
        }
        id
    }
}
