//! Points, squared distances, and axis-aligned boxes.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A non-negative squared Euclidean distance. Comparing squared distances
/// orders exactly like comparing true distances, so the square root can wait
/// until presentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct SquaredDistance(pub(crate) f64);

impl SquaredDistance {
    pub const ZERO: Self = Self(0.0);

    /// Wraps a raw value; rejects negatives and non-finite input.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        if value < 0.0 {
            return Err(Error::NegativeDistance);
        }
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<SquaredDistance> for f64 {
    fn from(d: SquaredDistance) -> f64 {
        d.0
    }
}

/// One search hit: an index into the dataset plus the squared distance from
/// the query to that point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub dist2: SquaredDistance,
}

/// A point in d-dimensional space, d >= 1, all coordinates finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Axis-aligned box: a closed interval [low, high] per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    low: Vec<f64>,
    high: Vec<f64>,
}

impl AxisBox {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        if low.len() != high.len() {
            return Err(Error::DimensionMismatch { expected: low.len(), found: high.len() });
        }
        if low.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (axis, (l, h)) in low.iter().zip(&high).enumerate() {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::NonFinite);
            }
            if l > h {
                return Err(Error::InvalidBounds { axis });
            }
        }
        Ok(Self { low, high })
    }

    /// Tight bounding box of a non-empty dataset.
    pub fn enclosing(data: &crate::Dataset) -> Result<Self> {
        let mut points = data.points();
        let first = points.next().ok_or(Error::EmptyDataset)?;
        let mut low = first.to_vec();
        let mut high = first.to_vec();
        for p in points {
            for (axis, &c) in p.iter().enumerate() {
                if c < low[axis] {
                    low[axis] = c;
                }
                if c > high[axis] {
                    high[axis] = c;
                }
            }
        }
        Ok(Self { low, high })
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[f64] {
        &self.low
    }

    pub fn high(&self) -> &[f64] {
        &self.high
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.low.iter().zip(&self.high))
                .all(|(&c, (&l, &h))| l <= c && c <= h)
    }
}

/// Squared Euclidean distance between two equal-dimension coordinate slices.
pub fn squared_euclidean(p: &[f64], q: &[f64]) -> Result<SquaredDistance> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    Ok(SquaredDistance(dist2(p, q)))
}

/// Hot-path version of `squared_euclidean`; callers check dimensions once at
/// the query boundary.
#[inline]
pub(crate) fn dist2(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut acc = 0.0;
    for (a, b) in p.iter().zip(q) {
        let d = a - b;
        acc += d * d;
    }
    acc
}

/// Distance from `q` to the nearest coordinate of the interval [low, high];
/// zero when `q` lies inside.
#[inline]
pub(crate) fn axis_excess(low: f64, high: f64, q: f64) -> f64 {
    if q < low {
        low - q
    } else if q > high {
        q - high
    } else {
        0.0
    }
}

/// Squared distance from `q` to the closest point of the box; zero when `q`
/// is inside. Only axes where `q` falls outside contribute.
pub fn box_distance2(b: &AxisBox, q: &[f64]) -> Result<SquaredDistance> {
    if b.dim() != q.len() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: q.len() });
    }
    Ok(SquaredDistance(box_dist2(&b.low, &b.high, q)))
}

#[inline]
pub(crate) fn box_dist2(low: &[f64], high: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..q.len() {
        let e = axis_excess(low[i], high[i], q[i]);
        acc += e * e;
    }
    acc
}

/// Squared distance to a child box given the parent's: the contribution along
/// the split axis is swapped out and the new one swapped in. One axis of work
/// instead of d.
pub fn incremental_box_distance2(
    parent_dist2: SquaredDistance,
    old_offset2: SquaredDistance,
    new_offset2: SquaredDistance,
) -> Result<SquaredDistance> {
    let value = parent_dist2.0 - old_offset2.0 + new_offset2.0;
    if value < 0.0 {
        return Err(Error::NegativeBoxDistance);
    }
    Ok(SquaredDistance(value))
}
