//! Tolerances used by the validators and verifiers.
//!
//! Every threshold a verdict is judged against lives here so reports can
//! echo them.

/// Identities that are exact polynomials in the coordinates (group law,
/// conjugation, structure-constant identities).
pub const EXACT: f64 = 1e-12;

/// Unit modulus of characters.
pub const UNIT_MODULUS: f64 = 1e-15;

/// Linearity of assembled operators in the kernel.
pub const LINEARITY: f64 = 1e-13;

/// Two independent assembly code paths for the same quadrature sum.
pub const ASSEMBLY_AGREEMENT: f64 = 1e-13;

/// Band-limited translation: homomorphism and covariance residuals.
pub const SPECTRAL: f64 = 1e-8;

/// Intertwining residuals at default grids.
pub const INTERTWINING: f64 = 1e-6;

/// Reconstruction residual after calibration, at default grids.
pub const RECONSTRUCTION: f64 = 1e-3;

/// Required improvement of the reconstruction residual under refinement.
pub const RECONSTRUCTION_REFINE_GAIN: f64 = 10.0;

/// Direct versus FFT evaluation of the paren transform (relative to its sup).
pub const PAREN_FAST_AGREEMENT: f64 = 1e-8;

/// Paren transform of a Gaussian against its closed form.
pub const PAREN_CLOSED_FORM: f64 = 1e-6;

/// Imaginary part of the paren transform of a real even kernel.
pub const PAREN_REALITY: f64 = 1e-10;

/// Relative convergence tolerance of the power iteration.
pub const POWER_ITERATION: f64 = 1e-10;

/// Iteration cap of the power iteration.
pub const POWER_ITERATION_CAP: usize = 10_000;

/// Multiplication realization checked against the conjugation definition.
pub const LAMBDA_RHO_CONSISTENCY: f64 = 1e-6;

/// Smallest admissible `|Φ|` sample.
pub const DEGENERATE_WAVELET: f64 = 1e-300;

/// Relative mass wrapped around the periodic grid above which a translation
/// is flagged as truncated.
pub const WRAP_WARNING: f64 = 1e-12;
