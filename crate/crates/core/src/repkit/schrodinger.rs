use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{RepError, StateVector};
use crate::grid::RepGrid;
use crate::homogeneous::{Character, HomogeneousChart};
use crate::lie::GroupPoint;
use crate::tolerances::WRAP_WARNING;

/// Schrödinger representation of the Heisenberg group on a discretized line:
///
/// ```text
/// [π(u, v, s) f](t) = exp(iλ(s − u t − u v / 2)) · f(t + v)
/// ```
///
/// in the coordinates `(u, v, s)` of [`crate::lie::NilpotentAlgebra::heisenberg`],
/// where `[e0, e1] = e2`. With this sign of the modulation `π` is a
/// homomorphism for the group law `(g1 g2)_s = s1 + s2 + ½(u1 v2 − v1 u2)`.
/// The translation is band-limited: the grid is treated as periodic and
/// shifted by a phase ramp in Fourier space, so every `π(g)` is unitary.
#[derive(Clone)]
pub struct SchrodingerRep {
    hbar: f64,
    grid: RepGrid,
    chart: HomogeneousChart,
    freqs: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SchrodingerRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchrodingerRep")
            .field("hbar", &self.hbar)
            .field("grid", &self.grid)
            .finish()
    }
}

/// Result of applying `π(g)` to a vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub state: StateVector,
    /// Fraction of `‖v‖²` that the periodic translation wrapped around the
    /// grid ends.
    pub wrapped_fraction: f64,
}

impl Applied {
    pub fn truncated(&self) -> bool {
        self.wrapped_fraction > WRAP_WARNING
    }
}

impl SchrodingerRep {
    pub fn new(hbar: f64, grid: RepGrid) -> Result<Self, RepError> {
        if hbar == 0.0 || !hbar.is_finite() {
            return Err(RepError::BadHbar(hbar));
        }
        let mut planner = FftPlanner::new();
        Ok(SchrodingerRep {
            hbar,
            grid,
            chart: HomogeneousChart::heisenberg_center(),
            freqs: grid.angular_frequencies(),
            forward: planner.plan_fft_forward(grid.len()),
            inverse: planner.plan_fft_inverse(grid.len()),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn grid(&self) -> &RepGrid {
        &self.grid
    }

    /// The Heisenberg group with `H` its centre.
    pub fn chart(&self) -> &HomogeneousChart {
        &self.chart
    }

    /// Same `λ` on a refined grid.
    pub fn refined(&self) -> Self {
        Self::new(self.hbar, self.grid.refined()).expect("valid parameters")
    }

    /// The character `χ` for which wavelet transforms satisfy
    /// `F(g h) = χ(h) F(g)`. The centre acts by `e^{iλs}` and the transform
    /// conjugates it, so `χ(h) = e^{-iλh}`.
    pub fn covariant_character(&self) -> Character {
        Character::new(&self.chart, vec![-self.hbar]).expect("centre is abelian")
    }

    pub(crate) fn check_point(&self, g: &GroupPoint) -> Result<(), RepError> {
        if g.dim() != 3 {
            return Err(RepError::PointDimension(g.dim()));
        }
        Ok(())
    }

    pub(crate) fn check_state(&self, v: &StateVector) -> Result<(), RepError> {
        if *v.grid() != self.grid {
            return Err(RepError::GridMismatch);
        }
        Ok(())
    }

    /// `exp(iλ(s − u t − u v / 2))`.
    #[inline]
    pub(crate) fn phase(&self, u: f64, v: f64, s: f64, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.hbar * (s - u * t - 0.5 * u * v))
    }

    /// Band-limited `f(t + shift)` on the periodic grid.
    pub(crate) fn translate(&self, samples: &[Complex64], shift: f64) -> Vec<Complex64> {
        let mut buf = samples.to_vec();
        if shift == 0.0 {
            return buf;
        }
        self.forward.process(&mut buf);
        let scale = 1.0 / self.grid.len() as f64;
        for (z, &w) in buf.iter_mut().zip(&self.freqs) {
            *z *= Complex64::from_polar(scale, w * shift);
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// First column `τ` of the circulant translation matrix:
    /// `(T f)_i = Σ_j τ[(i − j) mod n] f_j`.
    pub(crate) fn translation_kernel(&self, shift: f64) -> Vec<Complex64> {
        let n = self.grid.len();
        let mut buf: Vec<Complex64> = self
            .freqs
            .iter()
            .map(|&w| Complex64::from_polar(1.0 / n as f64, w * shift))
            .collect();
        self.inverse.process(&mut buf);
        buf
    }

    fn wrapped_fraction(&self, samples: &[Complex64], shift: f64) -> f64 {
        let total: f64 = samples.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 || shift == 0.0 {
            return 0.0;
        }
        let (lo, hi) = (self.grid.t_min(), self.grid.t_max());
        let wrapped: f64 = samples
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                let t = self.grid.point(i);
                if shift > 0.0 {
                    t < lo + shift
                } else {
                    t > hi + shift
                }
            })
            .map(|(_, z)| z.norm_sqr())
            .sum();
        wrapped / total
    }

    /// `π(g) v`.
    pub fn apply(&self, g: &GroupPoint, v: &StateVector) -> Result<Applied, RepError> {
        self.check_point(g)?;
        self.check_state(v)?;
        let (u, shift, s) = (g.coords()[0], g.coords()[1], g.coords()[2]);
        let wrapped_fraction = self.wrapped_fraction(v.samples(), shift);
        let mut out = self.translate(v.samples(), shift);
        for (i, z) in out.iter_mut().enumerate() {
            *z *= self.phase(u, shift, s, self.grid.point(i));
        }
        Ok(Applied {
            state: StateVector::from_parts(self.grid, out),
            wrapped_fraction,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::NilpotentGroup;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gp(v: &[f64]) -> GroupPoint {
        GroupPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_and_centre() {
        let rep = SchrodingerRep::new(1.3, RepGrid::default_grid()).unwrap();
        let v = StateVector::hermite(*rep.grid(), 2);
        assert_eq!(rep.apply(&gp(&[0.0; 3]), &v).unwrap().state, v);
        let s = 0.77;
        let out = rep.apply(&gp(&[0.0, 0.0, s]), &v).unwrap().state;
        let expected = v.scaled(Complex64::from_polar(1.0, 1.3 * s));
        assert!(out.distance(&expected).unwrap() <= 1e-15);
    }

    #[test]
    fn is_unitary() {
        let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
        let v = StateVector::hermite(*rep.grid(), 3);
        for g in [[0.0, 0.0, 2.0], [1.5, 0.0, 0.0], [0.0, 4.0 * rep.grid().spacing(), 0.0], [0.7, -1.3, 0.2]] {
            let out = rep.apply(&gp(&g), &v).unwrap();
            assert!((out.state.norm() - v.norm()).abs() <= 1e-12);
            assert!(!out.truncated());
        }
    }

    #[test]
    fn grid_translation_is_a_shift() {
        let grid = RepGrid::default_grid();
        let rep = SchrodingerRep::new(1.0, grid).unwrap();
        let v = StateVector::gaussian(grid);
        let out = rep.apply(&gp(&[0.0, 5.0 * grid.spacing(), 0.0]), &v).unwrap().state;
        for i in 0..grid.len() - 5 {
            assert!((out.samples()[i] - v.samples()[i + 5]).norm() < 1e-13);
        }
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
        let group = NilpotentGroup::heisenberg();
        let v = StateVector::gaussian(*rep.grid());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g1 = gp(&[rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-2.0..2.0)]);
            let g2 = gp(&[rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(-2.0..2.0)]);
            let two_step = rep.apply(&g1, &rep.apply(&g2, &v).unwrap().state).unwrap().state;
            let one_step = rep.apply(&group.multiply(&g1, &g2).unwrap(), &v).unwrap().state;
            assert!(two_step.distance(&one_step).unwrap() / v.norm() <= 1e-8);
        }
    }

    #[test]
    fn large_translation_is_flagged() {
        let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
        let v = StateVector::gaussian(*rep.grid());
        assert!(rep.apply(&gp(&[0.0, 9.0, 0.0]), &v).unwrap().truncated());
        assert!(rep.apply(&gp(&[0.0, -9.0, 0.0]), &v).unwrap().truncated());
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
        let other = StateVector::gaussian(RepGrid::new(-4.0, 4.0, 64).unwrap());
        assert!(matches!(rep.apply(&gp(&[0.0; 3]), &other), Err(RepError::GridMismatch)));
        let v = StateVector::gaussian(*rep.grid());
        assert!(matches!(rep.apply(&gp(&[0.0; 2]), &v), Err(RepError::PointDimension(2))));
        assert!(SchrodingerRep::new(0.0, RepGrid::default_grid()).is_err());
    }
}
