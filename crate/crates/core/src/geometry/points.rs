use std::ops::{Deref, Range};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexCombination;

/// A dense real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(j) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("coordinate {j} is not finite")));
        }
        Ok(Point(coords))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Indexed access to a finite family of points in `R^d`.
///
/// [`PointSet`] stores points densely; the protocol compiler implements this
/// over bit-packed output tables so that `R^{2^{2n}}` embeddings never need to
/// be materialized as `f64`.
pub trait PointSource: Sync {
    fn dimension(&self) -> usize;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coordinate(&self, index: usize, coord: usize) -> f64;

    /// `acc[j] += weight * p_index[coords.start + j]` for every `j` in the range.
    fn accumulate(&self, index: usize, weight: f64, coords: Range<usize>, acc: &mut [f64]) {
        for (a, j) in acc.iter_mut().zip(coords) {
            *a += weight * self.coordinate(index, j);
        }
    }

    /// `max_i ||p_i||_inf`.
    fn linf_radius(&self) -> f64 {
        (0..self.len())
            .flat_map(|i| (0..self.dimension()).map(move |j| (i, j)))
            .map(|(i, j)| self.coordinate(i, j).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Point>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("point set is empty".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: p.len(),
            });
        }
        Ok(PointSet { dimension, points })
    }

    /// Builds a set from raw rows, taking the dimension from the first row.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dimension = rows.first().map_or(0, Vec::len);
        let points = rows.into_iter().map(Point::new).collect::<Result<_>>()?;
        PointSet::new(dimension, points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.points[index]
    }
}

impl PointSource for PointSet {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn coordinate(&self, index: usize, coord: usize) -> f64 {
        self.points[index][coord]
    }

    fn accumulate(&self, index: usize, weight: f64, coords: Range<usize>, acc: &mut [f64]) {
        for (a, &c) in acc.iter_mut().zip(&self.points[index][coords]) {
            *a += weight * c;
        }
    }

    fn linf_radius(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub index: usize,
    pub weight: f64,
}

/// JSON interchange document: `{"dimension", "points", "weights"?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinationFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntry>>,
}

impl CombinationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    pub fn point_set(&self) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .cloned()
            .map(Point::new)
            .collect::<Result<_>>()?;
        PointSet::new(self.dimension, points)
    }

    /// The combination described by `weights`, or `None` when the field is absent.
    pub fn combination(&self) -> Result<Option<ConvexCombination>> {
        self.weights
            .as_ref()
            .map(|ws| {
                ConvexCombination::new(
                    ws.iter().map(|w| (w.index, w.weight)).collect(),
                    self.points.len(),
                )
            })
            .transpose()
    }

    pub fn from_parts(points: &PointSet, combination: Option<&ConvexCombination>) -> Self {
        CombinationFile {
            dimension: points.dimension(),
            points: points.points().iter().map(|p| p.to_vec()).collect(),
            weights: combination.map(|c| {
                c.support()
                    .iter()
                    .map(|&(index, weight)| WeightEntry { index, weight })
                    .collect()
            }),
        }
    }
}
