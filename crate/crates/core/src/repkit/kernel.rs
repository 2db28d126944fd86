use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RepError;
use crate::grid::BoxGrid;

macro_rules! sampled_kernel {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            grid: BoxGrid,
            samples: Vec<Complex64>,
        }

        impl $name {
            pub fn new(grid: BoxGrid, samples: Vec<Complex64>) -> Result<Self, RepError> {
                if samples.len() != grid.len() {
                    return Err(RepError::SampleCount {
                        expected: grid.len(),
                        found: samples.len(),
                    });
                }
                if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(RepError::NonFinite);
                }
                Ok($name { grid, samples })
            }

            pub fn zeros(grid: BoxGrid) -> Self {
                let samples = vec![Complex64::new(0.0, 0.0); grid.len()];
                $name { grid, samples }
            }

            pub fn from_fn(grid: BoxGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
                let samples = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
                $name { grid, samples }
            }

            /// Discrete point mass at the node nearest `at`, normalized so
            /// that its trapezoid integral is one.
            pub fn delta(grid: BoxGrid, at: &[f64]) -> Result<Self, RepError> {
                let node = grid.nearest(at)?;
                let mut k = Self::zeros(grid);
                k.samples[node] = Complex64::new(1.0 / k.grid.weight(node), 0.0);
                Ok(k)
            }

            pub fn grid(&self) -> &BoxGrid {
                &self.grid
            }

            pub fn samples(&self) -> &[Complex64] {
                &self.samples
            }

            pub fn scaled(&self, alpha: Complex64) -> Self {
                $name {
                    grid: self.grid.clone(),
                    samples: self.samples.iter().map(|z| z * alpha).collect(),
                }
            }

            /// `self + alpha * other`.
            pub fn axpy(&self, alpha: Complex64, other: &Self) -> Result<Self, RepError> {
                if self.grid != other.grid {
                    return Err(RepError::GridMismatch);
                }
                Ok($name {
                    grid: self.grid.clone(),
                    samples: self
                        .samples
                        .iter()
                        .zip(&other.samples)
                        .map(|(a, b)| a + alpha * b)
                        .collect(),
                })
            }

            /// Trapezoid integral.
            pub fn integral(&self) -> Complex64 {
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(i, z)| z * self.grid.weight(i))
                    .sum()
            }

            /// Trapezoid `∫ |k|`.
            pub fn l1_norm(&self) -> f64 {
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(i, z)| z.norm() * self.grid.weight(i))
                    .sum()
            }

            pub fn is_zero(&self) -> bool {
                self.samples.iter().all(|z| *z == Complex64::new(0.0, 0.0))
            }
        }
    };
}

sampled_kernel!(
    /// Samples of a kernel on `X = G/H` over a bounding box; zero outside.
    KernelOnX
);

sampled_kernel!(
    /// Samples of a kernel on `G` over a bounding box in exponential
    /// coordinates; zero outside.
    KernelOnG
);

/// Named kernel families, evaluable on any box grid.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `amplitude · exp(−|x|² / (2 width²))`.
    Gaussian { width: f64, amplitude: f64 },
    /// Gaussian envelope times a random trigonometric polynomial:
    /// `exp(−|x|²/(2 width²)) Σ_m c_m exp(i ξ_m·x)` with `modes` terms,
    /// `c_m` complex with independent uniform parts in `[−1, 1]` scaled by
    /// `1/√modes`, and frequencies `ξ_m` uniform in `[−max_frequency, max_frequency]`.
    BandLimitedRandom {
        seed: u64,
        modes: usize,
        max_frequency: f64,
        width: f64,
    },
    /// Unit point mass at the node nearest the origin.
    Delta,
}

impl KernelFamily {
    pub fn band_limited(seed: u64) -> Self {
        KernelFamily::BandLimitedRandom {
            seed,
            modes: 4,
            max_frequency: 2.0,
            width: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Gaussian { .. } => "gaussian",
            KernelFamily::BandLimitedRandom { .. } => "band-limited-random",
            KernelFamily::Delta => "delta",
        }
    }

    pub fn sample(&self, grid: &BoxGrid) -> Result<KernelOnX, RepError> {
        match *self {
            KernelFamily::Gaussian { width, amplitude } => Ok(KernelOnX::from_fn(grid.clone(), |x| {
                let r2: f64 = x.iter().map(|c| c * c).sum();
                Complex64::new(amplitude * (-r2 / (2.0 * width * width)).exp(), 0.0)
            })),
            KernelFamily::BandLimitedRandom {
                seed,
                modes,
                max_frequency,
                width,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let norm = 1.0 / (modes.max(1) as f64).sqrt();
                let terms: Vec<(Complex64, Vec<f64>)> = (0..modes)
                    .map(|_| {
                        let c = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)) * norm;
                        let xi = (0..grid.dims())
                            .map(|_| rng.random_range(-max_frequency..=max_frequency))
                            .collect();
                        (c, xi)
                    })
                    .collect();
                Ok(KernelOnX::from_fn(grid.clone(), |x| {
                    let r2: f64 = x.iter().map(|c| c * c).sum();
                    let envelope = (-r2 / (2.0 * width * width)).exp();
                    let wave: Complex64 = terms
                        .iter()
                        .map(|(c, xi)| {
                            let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                            c * Complex64::from_polar(1.0, phase)
                        })
                        .sum();
                    wave * envelope
                }))
            }
            KernelFamily::Delta => KernelOnX::delta(grid.clone(), &vec![0.0; grid.dims()]),
        }
    }
}
