use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BoundError;
use crate::coefficient::CoefficientFunction;
use crate::homogeneous::{Character, HomogeneousChart, XPoint};
use crate::lie::GroupPoint;
use crate::repkit::KernelOnX;
use crate::spectral::fft_nd;
use crate::tolerances::LINEARITY;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LINEARITY_SAMPLES: usize = 32;
const LINEARITY_SEED: u64 = 0x11ea;

fn check_kernel(chart: &HomogeneousChart, k: &KernelOnX) -> Result<(), BoundError> {
    if k.grid().dims() != chart.x_dim() {
        return Err(BoundError::KernelDimension {
            expected: chart.x_dim(),
            found: k.grid().dims(),
        });
    }
    Ok(())
}

/// `⌢k(g) = ∫_X k(x) χ(h(x, g)) dx` by the trapezoid rule.
pub fn paren_transform(
    chart: &HomogeneousChart,
    chi: &Character,
    k: &KernelOnX,
    g: &GroupPoint,
) -> Result<Complex64, BoundError> {
    check_kernel(chart, k)?;
    let grid = k.grid();
    let mut acc = ZERO;
    for (node, value) in k.samples().iter().enumerate() {
        if *value == ZERO {
            continue;
        }
        let h = chart.h_of_xg(&XPoint(grid.point(node)), g)?;
        acc += value * grid.weight(node) * chi.eval(&h);
    }
    Ok(acc)
}

/// The linear map `x' ↦ ω(s(x'))` with `χ(h(x, s(x'))) = exp(i ω·x)`,
/// available when `h(x, g)` is bilinear (step two).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl FrequencyMap {
    pub fn new(chart: &HomogeneousChart, chi: &Character) -> Result<Self, BoundError> {
        let phase = |x: &[f64], g: &[f64]| -> Result<f64, BoundError> {
            let g = GroupPoint::new(g.to_vec())?;
            let h = chart.h_of_xg(&XPoint(x.to_vec()), &g)?;
            Ok(chi.weight().iter().zip(&h.0).map(|(w, c)| w * c).sum())
        };
        let m = chart.x_dim();
        let n = chart.group().dim();
        let mut rng = ChaCha8Rng::seed_from_u64(LINEARITY_SEED);
        let mut uniform = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.random_range(-2.0..2.0)).collect() };
        let mut worst = 0.0_f64;
        for _ in 0..LINEARITY_SAMPLES {
            let (x1, x2, g) = (uniform(m), uniform(m), uniform(n));
            let alpha = uniform(1)[0];
            let sum: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
            let scaled: Vec<f64> = x1.iter().map(|a| alpha * a).collect();
            let p1 = phase(&x1, &g)?;
            let additivity = phase(&sum, &g)? - p1 - phase(&x2, &g)?;
            let homogeneity = phase(&scaled, &g)? - alpha * p1;
            let (s1, s2) = (chart.section_coords(&x1), chart.section_coords(&x2));
            let s12 = chart.section_coords(&sum);
            let in_g = phase(&x2, &s12)? - phase(&x2, &s1)? - phase(&x2, &s2)?;
            let scale = 1.0 + p1.abs();
            worst = worst.max((additivity.abs() + homogeneity.abs() + in_g.abs()) / scale);
        }
        if worst > LINEARITY {
            return Err(BoundError::Nonlinear(worst));
        }
        let mut matrix = DMatrix::zeros(m, m);
        for j in 0..m {
            let mut e_j = vec![0.0; m];
            e_j[j] = 1.0;
            for i in 0..m {
                let mut e_i = vec![0.0; m];
                e_i[i] = 1.0;
                matrix[(j, i)] = phase(&e_j, &chart.section_coords(&e_i))?;
            }
        }
        let sv = matrix.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if !(hi > 0.0) || lo <= 1e-12 * hi {
            return Err(BoundError::SingularFrequencyMap(if hi > 0.0 { lo / hi } else { 0.0 }));
        }
        let inverse = matrix.clone().try_inverse().ok_or(BoundError::SingularFrequencyMap(lo / hi))?;
        Ok(FrequencyMap { matrix, inverse })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `ω(s(x'))`.
    pub fn frequency(&self, x: &[f64]) -> Vec<f64> {
        (0..x.len())
            .map(|j| (0..x.len()).map(|i| self.matrix[(j, i)] * x[i]).sum())
            .collect()
    }

    /// The `x'` with `ω(s(x')) = omega`.
    pub fn preimage(&self, omega: &[f64]) -> Vec<f64> {
        (0..omega.len())
            .map(|i| (0..omega.len()).map(|j| self.inverse[(i, j)] * omega[j]).sum())
            .collect()
    }
}

/// [`paren_transform_fast_with`] at oversampling factor 2.
pub fn paren_transform_fast(
    chart: &HomogeneousChart,
    chi: &Character,
    k: &KernelOnX,
) -> Result<CoefficientFunction, BoundError> {
    paren_transform_fast_with(chart, chi, k, 2)
}

/// `⌢k` on a full lattice of `G` points by one zero-padded FFT.
///
/// For step two, `χ(h(x, s(x'))) = exp(i ω·x)` with `ω = A x'`, so the
/// trapezoid sum is a discrete Fourier sum in `ω`. With padded lengths
/// `P_d = oversample · n_d` the lattice is `ω_d = 2π m_d / (P_d h_d)`,
/// `−P_d/2 ≤ m_d < P_d/2`; the output points are `s(A⁻¹ ω)`, in row-major
/// order of `m`. Values agree with [`paren_transform`] at the same points.
pub fn paren_transform_fast_with(
    chart: &HomogeneousChart,
    chi: &Character,
    k: &KernelOnX,
    oversample: usize,
) -> Result<CoefficientFunction, BoundError> {
    if oversample == 0 {
        return Err(BoundError::Oversample);
    }
    check_kernel(chart, k)?;
    let map = FrequencyMap::new(chart, chi)?;
    let grid = k.grid();
    let axes = grid.axes();
    let dims = axes.len();
    let padded: Vec<usize> = axes.iter().map(|a| oversample * a.n).collect();
    let total: usize = padded.iter().product();

    let mut data = vec![ZERO; total];
    for (node, value) in k.samples().iter().enumerate() {
        let idx = grid.multi_index(node);
        let flat = idx.iter().zip(&padded).fold(0, |acc, (i, p)| acc * p + i);
        data[flat] = value * grid.weight(node);
    }
    fft_nd(&mut data, &padded, true);

    let mut points = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut m = vec![0usize; dims];
    for _ in 0..total {
        let mut omega = vec![0.0; dims];
        let mut flat = 0;
        let mut offset = 0.0;
        for d in 0..dims {
            let p = padded[d];
            let signed = m[d] as i64 - (p / 2) as i64;
            omega[d] = 2.0 * PI * signed as f64 / (p as f64 * axes[d].spacing());
            offset += omega[d] * axes[d].min;
            flat = flat * p + signed.rem_euclid(p as i64) as usize;
        }
        values.push(Complex64::from_polar(1.0, offset) * data[flat]);
        points.push(GroupPoint::from_vec_unchecked(chart.section_coords(&map.preimage(&omega))));
        for d in (0..dims).rev() {
            m[d] += 1;
            if m[d] < padded[d] {
                break;
            }
            m[d] = 0;
        }
    }
    Ok(CoefficientFunction::new(points, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoxGrid;
    use crate::lie::{NilpotentAlgebra, NilpotentGroup};

    fn heisenberg() -> (HomogeneousChart, Character) {
        let chart = HomogeneousChart::heisenberg_center();
        let chi = Character::new(&chart, vec![-1.0]).unwrap();
        (chart, chi)
    }

    #[test]
    fn delta_and_identity() {
        let (chart, chi) = heisenberg();
        let grid = BoxGrid::cube(-2.0, 2.0, 9, 2).unwrap();
        let delta = KernelOnX::delta(grid.clone(), &[0.0, 0.0]).unwrap();
        let g = GroupPoint::new(vec![0.3, -1.2, 4.0]).unwrap();
        assert!((paren_transform(&chart, &chi, &delta, &g).unwrap() - 1.0).norm() < 1e-14);
        let k = KernelOnX::from_fn(grid, |x| Complex64::new(x[0], x[1] * x[1]));
        let at_e = paren_transform(&chart, &chi, &k, &GroupPoint::identity(3)).unwrap();
        assert!((at_e - k.integral()).norm() < 1e-14);
    }

    #[test]
    fn fast_path_matches_direct() {
        let (chart, chi) = heisenberg();
        let grid = BoxGrid::cube(-3.0, 3.0, 12, 2).unwrap();
        let k = KernelOnX::from_fn(grid, |x| Complex64::new((-x[0] * x[0]).exp(), x[1].sin()));
        let fast = paren_transform_fast(&chart, &chi, &k).unwrap();
        assert_eq!(fast.len(), 24 * 24);
        let scale = fast.sup_norm();
        for node in (0..fast.len()).step_by(37) {
            let direct = paren_transform(&chart, &chi, &k, &fast.points()[node]).unwrap();
            assert!((direct - fast.values()[node]).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn frequency_map_on_heisenberg() {
        let (chart, chi) = heisenberg();
        let map = FrequencyMap::new(&chart, &chi).unwrap();
        let w = map.frequency(&[2.0, 3.0]);
        // h(x, s(u, v)) = y u − x v, weight −1.
        assert!((w[0] - 3.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14, "{w:?}");
        let back = map.preimage(&w);
        assert!((back[0] - 2.0).abs() < 1e-14 && (back[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn higher_step_and_singular_maps_are_rejected() {
        let filiform = NilpotentGroup::new(NilpotentAlgebra::filiform4()).unwrap();
        let chart = HomogeneousChart::new(filiform, vec![2, 3]).unwrap();
        let chi = Character::new(&chart, vec![0.0, 1.0]).unwrap();
        assert!(matches!(FrequencyMap::new(&chart, &chi), Err(BoundError::Nonlinear(_))));

        let free = NilpotentGroup::new(NilpotentAlgebra::free_step2_rank3()).unwrap();
        let chart = HomogeneousChart::new(free, vec![3, 4, 5]).unwrap();
        let chi = Character::new(&chart, vec![1.0, 0.5, -0.25]).unwrap();
        assert!(matches!(
            FrequencyMap::new(&chart, &chi),
            Err(BoundError::SingularFrequencyMap(_))
        ));
    }

    #[test]
    fn zero_kernel() {
        let (chart, chi) = heisenberg();
        let k = KernelOnX::zeros(BoxGrid::cube(-1.0, 1.0, 8, 2).unwrap());
        let fast = paren_transform_fast(&chart, &chi, &k).unwrap();
        assert_eq!(fast.sup_norm(), 0.0);
    }
}
