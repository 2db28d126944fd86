//! Thin helpers over `rustfft` for row-major N-d arrays.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Unnormalized in-place FFT along every axis of a row-major array.
/// `inverse` selects the `e^{+2πi jk/n}` kernel.
pub fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    assert_eq!(data.len(), shape.iter().product::<usize>());
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = 1;
    for d in (0..shape.len()).rev() {
        let n = shape[d];
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let block = n * stride;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                plan.process(&mut line);
                for (i, value) in line.iter().enumerate() {
                    data[base + i * stride] = *value;
                }
            }
        }
        stride = block;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_naive_dft_2d() {
        let shape = [3, 4];
        let data: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new(i as f64 * 0.3 - 1.0, (i * i) as f64 * 0.05))
            .collect();
        let mut fast = data.clone();
        fft_nd(&mut fast, &shape, true);
        for m0 in 0..3 {
            for m1 in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for j0 in 0..3 {
                    for j1 in 0..4 {
                        let phase = 2.0 * PI * ((m0 * j0) as f64 / 3.0 + (m1 * j1) as f64 / 4.0);
                        acc += data[j0 * 4 + j1] * Complex64::from_polar(1.0, phase);
                    }
                }
                assert!((acc - fast[m0 * 4 + m1]).norm() < 1e-12);
            }
        }
    }
}
