//! Exhaustive k-nearest-neighbour baseline: every query scans every point.
//!
//! This is the reference every index is judged against, so it stays free of
//! any shared search machinery: build the full distance row, select the k
//! smallest, order just those.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geom::{dist2, Neighbor, SquaredDistance};
use crate::{Dataset, Error, Result};

/// The `k` nearest points to `query`, ascending by squared distance. Ties at
/// the cut are broken arbitrarily; the distance multiset is what is promised.
pub fn brute_knn(data: &Dataset, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
    check_query(data, query)?;
    check_k(k, data.len())?;
    let mut row: Vec<(f64, u32)> = data
        .points()
        .enumerate()
        .map(|(i, p)| (dist2(query, p), i as u32))
        .collect();
    Ok(take_smallest(&mut row, k))
}

/// One `brute_knn` row per query, in query order.
pub fn brute_knn_batch(data: &Dataset, queries: &Dataset, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    if queries.dim() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: queries.dim() });
    }
    queries.points().map(|q| brute_knn(data, q, k)).collect()
}

/// For every point, its `k` nearest among the *other* points. Self-matches
/// are excluded by index, so coincident distinct points still pair up.
pub fn brute_knn_join(data: &Dataset, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_k(k, data.len().saturating_sub(1))?;
    let n = data.len();
    let mut out = Vec::with_capacity(n);
    let mut row: Vec<(f64, u32)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let q = data.point(i);
        row.clear();
        row.extend(
            data.points()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, p)| (dist2(q, p), j as u32)),
        );
        out.push(take_smallest(&mut row, k));
    }
    Ok(out)
}

fn check_query(data: &Dataset, query: &[f64]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if query.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: query.len() });
    }
    Ok(())
}

fn check_k(k: usize, max: usize) -> Result<()> {
    if k < 1 || k > max {
        return Err(Error::InvalidK { k, max });
    }
    Ok(())
}

#[inline]
fn cmp_entry(a: &(f64, u32), b: &(f64, u32)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Selects the k smallest entries of a full distance row, then sorts just
/// those. O(n + k log k) instead of sorting all n.
fn take_smallest(row: &mut [(f64, u32)], k: usize) -> Vec<Neighbor> {
    if k < row.len() {
        row.select_nth_unstable_by(k - 1, cmp_entry);
    }
    let head = &mut row[..k];
    head.sort_unstable_by(cmp_entry);
    head.iter()
        .map(|&(d, i)| Neighbor { index: i as usize, dist2: SquaredDistance(d) })
        .collect()
}
