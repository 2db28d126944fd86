//! Discretized Schrödinger representation of the Heisenberg group, the
//! covariant and contravariant transforms, and operator assembly from
//! kernels on `G` or on `X = G/H`.
//!
//! Group integrals use the trapezoid rule on uniform box grids. Haar measure
//! is Lebesgue measure in exponential coordinates.

mod kernel;
mod operator;
mod schrodinger;
mod state;
mod transforms;

use thiserror::Error;

use crate::grid::GridError;
use crate::homogeneous::ChartError;
use crate::lie::LieError;

pub use kernel::{KernelFamily, KernelOnG, KernelOnX};
pub use operator::OperatorMatrix;
pub use schrodinger::{Applied, SchrodingerRep};
pub use state::{hermite_function, StateVector};
pub use transforms::{
    contravariant_transform, contravariant_transform_on_g, fold_center, integrated_rep,
    lambda_rho_action, relative_convolution, wavelet_transform, wavelet_transform_on_grid,
    Reconstruction,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("representation parameter λ must be finite and nonzero, got {0}")]
    BadHbar(f64),
    #[error("vectors or kernels live on different grids")]
    GridMismatch,
    #[error("expected {expected} samples, got {found}")]
    SampleCount { expected: usize, found: usize },
    #[error("samples must be finite")]
    NonFinite,
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("the Schrödinger representation acts on 3-dimensional points, got {0}")]
    PointDimension(usize),
    #[error("kernel grid has {found} axes, expected {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("calibration constant vanished")]
    DegenerateCalibration,
}
