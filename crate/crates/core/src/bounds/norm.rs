use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BoundError;
use crate::repkit::OperatorMatrix;
use crate::tolerances::{POWER_ITERATION, POWER_ITERATION_CAP};

const BLOCK: usize = 8;

/// Power iteration on `A* A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Stop once `‖A*A v − μ v‖ ≤ tolerance · μ`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tolerance: POWER_ITERATION,
            max_iterations: POWER_ITERATION_CAP,
            seed: 0x5eed,
        }
    }
}

impl PowerIteration {
    /// Largest singular value of `a`.
    ///
    /// Iterates a block of [`BLOCK`] vectors and takes the top Ritz pair of
    /// `A* A` on the block each step, so that clustered top singular values
    /// do not stall convergence.
    pub fn run(&self, a: &DMatrix<Complex64>) -> Result<f64, BoundError> {
        if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Ok(0.0);
        }
        let n = a.ncols();
        let b = BLOCK.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let start = DMatrix::from_fn(n, b, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let mut basis = start.qr().q();
        let adjoint = a.adjoint();
        let mut residual = f64::INFINITY;
        let mut estimate = 0.0;
        let mut top = DVector::zeros(n);
        for _ in 0..self.max_iterations {
            let image = &adjoint * (a * &basis);
            let projected = basis.adjoint() * &image;
            let projected = (&projected + projected.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = projected.symmetric_eigen();
            let k = eig.eigenvalues.imax();
            let theta = eig.eigenvalues[k].max(0.0);
            let y = eig.eigenvectors.column(k);
            top = &basis * y;
            residual = (&image * y - &top * Complex64::new(theta, 0.0)).norm();
            estimate = (a * &top).norm();
            if residual <= self.tolerance * theta {
                return Ok(estimate);
            }
            basis = image.qr().q();
        }
        Err(BoundError::NoConvergence {
            iterations: self.max_iterations,
            residual,
            estimate,
            last_iterate: top.iter().copied().collect(),
        })
    }
}

/// Largest singular value with the default power iteration.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> Result<f64, BoundError> {
    PowerIteration::default().run(a)
}

/// Operator norm on the grid's uniformly weighted `ℓ²`.
pub fn operator_norm(m: &OperatorMatrix) -> Result<f64, BoundError> {
    spectral_norm(m.entries())
}
