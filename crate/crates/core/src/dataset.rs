//! Flat, dimension-checked point storage shared by every engine.

use alloc::vec::Vec;

use crate::geom::Point;
use crate::{Error, Result};

/// n points of equal dimension, stored row-major in one buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    coords: Vec<f64>,
    dim: usize,
}

impl Dataset {
    /// Builds from a row-major buffer; the length must divide evenly into
    /// dimension-`dim` rows and every value must be finite.
    pub fn from_flat(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if coords.len() % dim != 0 {
            return Err(Error::RaggedCoordinates { len: coords.len(), dim });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords, dim })
    }

    /// Builds from points, which must all share one dimension. The slice may
    /// not be empty: an empty dataset has no dimension to carry.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyDataset)?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            coords.extend_from_slice(p.coords());
        }
        Ok(Self { coords, dim })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.dim..(index + 1) * self.dim]
    }

    /// Iterates the points as coordinate slices, in index order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// The whole buffer, row-major.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}
