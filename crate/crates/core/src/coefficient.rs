//! Complex functions on `G` sampled at a finite set of group points.

use num_complex::Complex64;

use crate::grid::BoxGrid;
use crate::homogeneous::HomogeneousChart;
use crate::lie::GroupPoint;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFunction {
    points: Vec<GroupPoint>,
    values: Vec<Complex64>,
    /// Present when `points` are the section `s(x)` of the nodes of an
    /// `X`-grid, in grid order.
    x_grid: Option<BoxGrid>,
}

impl CoefficientFunction {
    /// # Panics
    /// When `points` and `values` differ in length.
    pub fn new(points: Vec<GroupPoint>, values: Vec<Complex64>) -> Self {
        assert_eq!(points.len(), values.len(), "one value per point");
        CoefficientFunction {
            points,
            values,
            x_grid: None,
        }
    }

    /// Samples at `s(x)` for the nodes `x` of `grid`.
    pub fn on_section(chart: &HomogeneousChart, grid: &BoxGrid, values: Vec<Complex64>) -> Self {
        assert_eq!(grid.len(), values.len(), "one value per node");
        assert_eq!(grid.dims(), chart.x_dim(), "grid lives on X");
        let points = (0..grid.len())
            .map(|i| GroupPoint::from_vec_unchecked(chart.section_coords(&grid.point(i))))
            .collect();
        CoefficientFunction {
            points,
            values,
            x_grid: Some(grid.clone()),
        }
    }

    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn x_grid(&self) -> Option<&BoxGrid> {
        self.x_grid.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same points, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        CoefficientFunction {
            points: self.points.clone(),
            values,
            x_grid: self.x_grid.clone(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index and modulus of the smallest sample.
    pub fn min_abs(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .map(|z| z.norm())
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}
