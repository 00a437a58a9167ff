//! Multidimensional nearest-neighbour toolkit: an exhaustive baseline, a
//! median-split k-d tree with exact and epsilon-approximate k-NN search, and
//! spatial clustering over the approximate kNN graph.
//!
//! Everything in this crate works in *squared* Euclidean distances; no square
//! root is ever taken. Square roots belong to whoever presents the numbers.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod brute;
mod cluster;
mod dataset;
mod error;
mod geom;
mod kdtree;

pub use brute::{brute_knn, brute_knn_batch, brute_knn_join};
pub use cluster::{
    build_knn_graph, cluster, connected_components, ClusterLabeling, ClusterParams, Edge,
    KnnGraph, Linkage,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use geom::{
    box_distance2, incremental_box_distance2, squared_euclidean, AxisBox, Neighbor, Point,
    SquaredDistance,
};
pub use kdtree::{
    KdTree, NodeId, NodeView, SearchOrder, SearchParams, SearchStats, TreeStats,
    DEFAULT_BUCKET_SIZE,
};
