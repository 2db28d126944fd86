//! Uniform grids: the 1-D grid carrying the representation space and
//! rectangular boxes for kernels on `X` or `G`.

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least {min} points, got {found}")]
    TooFewPoints { min: usize, found: usize },
    #[error("grid bounds must satisfy min < max (got {min} .. {max})")]
    EmptyRange { min: f64, max: f64 },
    #[error("grid has {found} axes, expected {expected}")]
    AxisCount { expected: usize, found: usize },
    #[error("sample count {found} does not match grid size {expected}")]
    SampleCount { expected: usize, found: usize },
    #[error("grids differ")]
    Mismatch,
}

/// Minimum number of points of a representation grid.
pub const MIN_REP_POINTS: usize = 8;

/// `n_points` equally spaced samples of the line on `[t_min, t_max]`.
///
/// Translations treat the grid as periodic with period `n_points * spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepGrid {
    t_min: f64,
    t_max: f64,
    n_points: usize,
}

impl RepGrid {
    pub fn new(t_min: f64, t_max: f64, n_points: usize) -> Result<Self, GridError> {
        if n_points < MIN_REP_POINTS {
            return Err(GridError::TooFewPoints {
                min: MIN_REP_POINTS,
                found: n_points,
            });
        }
        if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(GridError::EmptyRange {
                min: t_min,
                max: t_max,
            });
        }
        Ok(RepGrid {
            t_min,
            t_max,
            n_points,
        })
    }

    /// `[-8, 8]` with 256 points.
    pub fn default_grid() -> Self {
        RepGrid::new(-8.0, 8.0, 256).expect("static grid")
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Angular frequencies in FFT order; the Nyquist bin of an even grid is
    /// assigned the negative frequency.
    pub fn angular_frequencies(&self) -> Vec<f64> {
        let n = self.n_points;
        let base = 2.0 * PI / (n as f64 * self.spacing());
        (0..n)
            .map(|k| {
                let signed = if k < n.div_ceil(2) { k as isize } else { k as isize - n as isize };
                signed as f64 * base
            })
            .collect()
    }

    /// Twice the points on a window `√2` times wider, same centre.
    ///
    /// Both the spacing (aliasing) and the window (truncation) improve, which
    /// is the balanced refinement for Gaussian-class functions.
    pub fn refined(&self) -> Self {
        let centre = 0.5 * (self.t_min + self.t_max);
        let half = 0.5 * (self.t_max - self.t_min) * SQRT_2;
        RepGrid::new(centre - half, centre + half, 2 * self.n_points).expect("refinement of a valid grid")
    }
}

/// One axis of a box grid: `n` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self, GridError> {
        if n < 2 {
            return Err(GridError::TooFewPoints { min: 2, found: n });
        }
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(GridError::EmptyRange { min, max });
        }
        Ok(Axis { min, max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.min + i as f64 * self.spacing()
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }

    fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.min) / self.spacing()).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Rectangular grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGrid {
    axes: Vec<Axis>,
}

impl BoxGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self, GridError> {
        if axes.is_empty() {
            return Err(GridError::AxisCount {
                expected: 1,
                found: 0,
            });
        }
        Ok(BoxGrid { axes })
    }

    /// The same axis repeated `dims` times.
    pub fn cube(min: f64, max: f64, n: usize, dims: usize) -> Result<Self, GridError> {
        let axis = Axis::new(min, max, n)?;
        BoxGrid::new(vec![axis; dims])
    }

    /// `[-6, 6]²` with 64 × 64 points.
    pub fn default_x_grid() -> Self {
        BoxGrid::cube(-6.0, 6.0, 64, 2).expect("static grid")
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            idx[d] = flat % axis.n;
            flat /= axis.n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, axis)| acc * axis.n + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis.point(i))
            .collect()
    }

    /// Product trapezoid weight of a node.
    pub fn weight(&self, flat: usize) -> f64 {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis.weight(i))
            .product()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    /// Node closest to `point` (clamped to the box).
    pub fn nearest(&self, point: &[f64]) -> Result<usize, GridError> {
        if point.len() != self.dims() {
            return Err(GridError::AxisCount {
                expected: self.dims(),
                found: point.len(),
            });
        }
        let idx: Vec<usize> = self
            .axes
            .iter()
            .zip(point)
            .map(|(a, &x)| a.nearest(x))
            .collect();
        Ok(self.flat_index(&idx))
    }

    /// Twice the points per axis over the same box.
    pub fn refined(&self) -> Self {
        BoxGrid {
            axes: self
                .axes
                .iter()
                .map(|a| Axis { n: 2 * a.n, ..*a })
                .collect(),
        }
    }

    /// Twice the points per axis over a box `√2` times wider about its centre,
    /// for grids that truncate an integral over all of `X`.
    pub fn refined_extended(&self) -> Self {
        BoxGrid {
            axes: self
                .axes
                .iter()
                .map(|a| {
                    let c = 0.5 * (a.min + a.max);
                    let half = 0.5 * (a.max - a.min) * SQRT_2;
                    Axis {
                        min: c - half,
                        max: c + half,
                        n: 2 * a.n,
                    }
                })
                .collect(),
        }
    }

    /// Sub-grid keeping every `stride`-th node of each axis (ends included
    /// when they fall on the stride).
    pub fn subsampled(&self, stride: usize) -> Self {
        let stride = stride.max(1);
        BoxGrid {
            axes: self
                .axes
                .iter()
                .map(|a| {
                    let n = (a.n - 1) / stride + 1;
                    Axis {
                        min: a.min,
                        max: a.min + (n - 1) as f64 * stride as f64 * a.spacing(),
                        n: n.max(2),
                    }
                })
                .collect(),
        }
    }
}
