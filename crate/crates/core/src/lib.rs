//! Relative convolutions on nilpotent Lie groups.
//!
//! A nilpotent Lie algebra of step at most three is given by structure
//! constants in an adapted basis. The group `G` is realized in exponential
//! coordinates with the Baker–Campbell–Hausdorff product. A splitting of the
//! basis into `H ⊇ [g, g]` and its complement gives the homogeneous space
//! `X = G/H` with the section `s(x) = exp(x)`.
//!
//! For the Heisenberg group the [`repkit`] module discretizes the
//! Schrödinger representation and builds relative convolution operators
//! `π(k) = ∫_X k(x) π(s(x)) dx`. The [`bounds`] module compares their
//! operator norms with sup norms of the covariant-side symbols.

pub mod bounds;
pub mod coefficient;
pub mod grid;
pub mod homogeneous;
pub mod lie;
pub mod repkit;
pub mod spectral;
pub mod tolerances;
pub mod verdict;

pub use num_complex::Complex64;

/// Crate version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
