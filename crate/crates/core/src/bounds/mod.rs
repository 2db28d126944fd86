//! The paren transform, operator norms, and the two sup-norm bounds for
//! relative convolutions.
//!
//! `Φ⁻¹` is only evaluated on the support of the kernel, since `Φ` decays
//! like a Gaussian at infinity and all kernels here are compactly supported.

mod norm;
mod paren;
mod verify;

use thiserror::Error;

use crate::grid::GridError;
use crate::homogeneous::ChartError;
use crate::lie::LieError;
use crate::repkit::RepError;

pub use norm::{operator_norm, spectral_norm, PowerIteration};
pub use paren::{paren_transform, paren_transform_fast, paren_transform_fast_with, FrequencyMap};
pub use verify::{
    compute_phi, verify_lemma_bound, verify_prop_bound, BoundKind, BoundVerdict, Refinement,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("mother wavelet must be normalized, ‖φ‖ = {0}")]
    NotNormalized(f64),
    #[error("degenerate wavelet: |Φ| = {modulus:e} at node {node}")]
    DegenerateWavelet { node: usize, modulus: f64 },
    #[error("h(x, g) is not linear in x (residual {0:e}); use the direct paren transform")]
    Nonlinear(f64),
    #[error("the frequency map x ↦ ω(s(x)) is singular (condition {0:e})")]
    SingularFrequencyMap(f64),
    #[error("kernel grid has {found} axes, X has dimension {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("oversampling factor must be at least 1")]
    Oversample,
    #[error(
        "power iteration did not converge in {iterations} steps (residual {residual:e}, estimate {estimate})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        estimate: f64,
        last_iterate: Vec<num_complex::Complex64>,
    },
}
