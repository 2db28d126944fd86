use std::f64::consts::PI;

use num_complex::Complex64;

use super::RepError;
use crate::grid::RepGrid;

/// Complex samples of a vector of `L²(ℝ)` on a [`RepGrid`].
///
/// The inner product is `⟨u, v⟩ = h Σ u_i conj(v_i)`, linear in the first
/// argument, with `h` the grid spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    grid: RepGrid,
    samples: Vec<Complex64>,
}

impl StateVector {
    pub fn new(grid: RepGrid, samples: Vec<Complex64>) -> Result<Self, RepError> {
        if samples.len() != grid.len() {
            return Err(RepError::SampleCount {
                expected: grid.len(),
                found: samples.len(),
            });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(RepError::NonFinite);
        }
        Ok(StateVector { grid, samples })
    }

    pub fn zeros(grid: RepGrid) -> Self {
        StateVector {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: RepGrid, f: impl Fn(f64) -> Complex64) -> Self {
        StateVector {
            grid,
            samples: grid.points().into_iter().map(f).collect(),
        }
    }

    /// `π^{-1/4} exp(-t²/2)`, the default mother wavelet.
    pub fn gaussian(grid: RepGrid) -> Self {
        Self::hermite(grid, 0)
    }

    /// Normalized Hermite function of order `n`, by the three-term recurrence.
    pub fn hermite(grid: RepGrid, n: usize) -> Self {
        Self::from_fn(grid, |t| Complex64::new(hermite_function(n, t), 0.0))
    }

    pub fn grid(&self) -> &RepGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }


    pub(crate) fn from_parts(grid: RepGrid, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), samples.len());
        StateVector { grid, samples }
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub(crate) fn same_grid(&self, other: &StateVector) -> Result<(), RepError> {
        if self.grid != other.grid {
            return Err(RepError::GridMismatch);
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64, RepError> {
        self.same_grid(other)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &StateVector) -> Complex64 {
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b.conj())
            .sum();
        sum * self.grid.spacing()
    }

    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn normalized(&self) -> Result<Self, RepError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(RepError::ZeroVector);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        StateVector {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * alpha).collect(),
        }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: Complex64, other: &StateVector) -> Result<Self, RepError> {
        self.same_grid(other)?;
        Ok(StateVector {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        })
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64, RepError> {
        Ok(self.axpy(Complex64::new(-1.0, 0.0), other)?.norm())
    }
}

/// Normalized Hermite function `h_n(t)`.
pub fn hermite_function(n: usize, t: f64) -> f64 {
    let h0 = PI.powf(-0.25) * (-0.5 * t * t).exp();
    if n == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = 2.0_f64.sqrt() * t * h0;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * t * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}
