//! The homogeneous space `X = G/H` as a coordinate block.
//!
//! A chart splits the exponential coordinates of `G` into an `H` block and an
//! `X` block. The projection `p` keeps the `X` block, the section `s` fills
//! the `H` block with zeros. When `H` contains `[g, g]` the section satisfies
//! the complemented commutator property `p(s(x)⁻¹ g s(x)) = p(g)`, so the
//! commutator element `h(x, g) = g⁻¹ s(x)⁻¹ g s(x)` lies in `H`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lie::{random_point, GroupPoint, LieError, NilpotentGroup};
use crate::tolerances::EXACT;
use crate::verdict::{Check, ValidationVerdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("index {0} listed more than once or out of range")]
    BadIndex(usize),
    #[error("H indices {h:?} do not contain the commutator indices {commutator:?}")]
    MissingCommutator { h: Vec<usize>, commutator: Vec<usize> },
    #[error("g⁻¹s(x)⁻¹gs(x) has X-part of size {residual:e}; the chart violates the complemented commutator property")]
    CcpViolation { residual: f64 },
    #[error("character weight has length {found}, H has dimension {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("character weight does not vanish on [h, h] (residual {0:e})")]
    NotACharacter(f64),
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
}

/// Coordinates of a point of `X = G/H` (the `x_indices` block).
#[derive(Debug, Clone, PartialEq)]
pub struct XPoint(pub Vec<f64>);

/// Coordinates of an element of `H` (the `h_indices` block).
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousChart {
    group: NilpotentGroup,
    h_indices: Vec<usize>,
    x_indices: Vec<usize>,
}

impl HomogeneousChart {
    /// Builds a chart and requires `h_indices ⊇ commutator_subalgebra`.
    pub fn new(group: NilpotentGroup, h_indices: Vec<usize>) -> Result<Self, ChartError> {
        let chart = Self::new_unchecked(group, h_indices)?;
        let commutator = chart.group.algebra().commutator_subalgebra()?;
        if !commutator.iter().all(|c| chart.h_indices.contains(c)) {
            return Err(ChartError::MissingCommutator {
                h: chart.h_indices,
                commutator,
            });
        }
        Ok(chart)
    }

    /// Only checks that `h_indices` is a set of valid indices. Used to probe
    /// charts that are expected to fail the property checks.
    pub fn new_unchecked(group: NilpotentGroup, mut h_indices: Vec<usize>) -> Result<Self, ChartError> {
        let n = group.dim();
        h_indices.sort_unstable();
        for w in h_indices.windows(2) {
            if w[0] == w[1] {
                return Err(ChartError::BadIndex(w[0]));
            }
        }
        if let Some(&bad) = h_indices.iter().find(|&&i| i >= n) {
            return Err(ChartError::BadIndex(bad));
        }
        let x_indices = (0..n).filter(|i| !h_indices.contains(i)).collect();
        Ok(HomogeneousChart {
            group,
            h_indices,
            x_indices,
        })
    }

    /// Heisenberg group with `H` its centre: `X` has coordinates `(x, y)`.
    pub fn heisenberg_center() -> Self {
        Self::new(NilpotentGroup::heisenberg(), vec![2]).expect("static chart")
    }

    pub fn group(&self) -> &NilpotentGroup {
        &self.group
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h_indices
    }

    pub fn x_indices(&self) -> &[usize] {
        &self.x_indices
    }

    pub fn x_dim(&self) -> usize {
        self.x_indices.len()
    }

    pub fn h_dim(&self) -> usize {
        self.h_indices.len()
    }

    /// `p(g)`.
    pub fn project(&self, g: &GroupPoint) -> XPoint {
        XPoint(self.x_indices.iter().map(|&i| g.coords()[i]).collect())
    }

    /// The `H` block of `g`.
    pub fn h_part(&self, g: &GroupPoint) -> HPoint {
        HPoint(self.h_indices.iter().map(|&i| g.coords()[i]).collect())
    }

    /// Zero-fill section `s(x)`.
    pub fn section(&self, x: &XPoint) -> Result<GroupPoint, ChartError> {
        self.check_x(x)?;
        Ok(GroupPoint::from_vec_unchecked(self.section_coords(&x.0)))
    }

    pub(crate) fn section_coords(&self, x: &[f64]) -> Vec<f64> {
        let mut coords = vec![0.0; self.group.dim()];
        for (&i, &v) in self.x_indices.iter().zip(x) {
            coords[i] = v;
        }
        coords
    }

    /// Embeds `h` as a group element with zero `X` block.
    pub fn h_element(&self, h: &HPoint) -> Result<GroupPoint, ChartError> {
        if h.0.len() != self.h_dim() {
            return Err(ChartError::PointLength {
                expected: self.h_dim(),
                found: h.0.len(),
            });
        }
        let mut coords = vec![0.0; self.group.dim()];
        for (&i, &v) in self.h_indices.iter().zip(&h.0) {
            coords[i] = v;
        }
        Ok(GroupPoint::from_vec_unchecked(coords))
    }

    fn check_x(&self, x: &XPoint) -> Result<(), ChartError> {
        if x.0.len() != self.x_dim() {
            return Err(ChartError::PointLength {
                expected: self.x_dim(),
                found: x.0.len(),
            });
        }
        Ok(())
    }

    /// Full coordinates of `g⁻¹ s(x)⁻¹ g s(x)`.
    pub(crate) fn commutator_coords(&self, x: &[f64], g: &[f64]) -> Vec<f64> {
        let s = self.section_coords(x);
        let s_inv: Vec<f64> = s.iter().map(|c| -c).collect();
        let g_inv: Vec<f64> = g.iter().map(|c| -c).collect();
        let gs = self.group.bch(g, &s);
        let s_inv_gs = self.group.bch(&s_inv, &gs);
        self.group.bch(&g_inv, &s_inv_gs)
    }

    /// `h(x, g) = g⁻¹ s(x)⁻¹ g s(x)`, returned as `H` coordinates. Fails when
    /// the product has an `X` component above `1e-12`.
    pub fn h_of_xg(&self, x: &XPoint, g: &GroupPoint) -> Result<HPoint, ChartError> {
        self.check_x(x)?;
        if g.dim() != self.group.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.group.dim(),
                found: g.dim(),
            }
            .into());
        }
        let full = self.commutator_coords(&x.0, g.coords());
        let residual = self
            .x_indices
            .iter()
            .map(|&i| full[i].abs())
            .fold(0.0, f64::max);
        if !(residual <= EXACT) {
            return Err(ChartError::CcpViolation { residual });
        }
        Ok(HPoint(self.h_indices.iter().map(|&i| full[i]).collect()))
    }

    /// Checks `p(s(x)⁻¹ g s(x)) = p(g)` on `samples` seeded pairs with
    /// coordinates uniform in `[-2, 2]`.
    pub fn check_ccp(&self, samples: usize, seed: u64) -> ValidationVerdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.group.dim();
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let x = random_point(&mut rng, n, 2.0);
            let x = self.project(&x);
            let g = random_point(&mut rng, n, 2.0);
            let s = self.section_coords(&x.0);
            let s_inv: Vec<f64> = s.iter().map(|c| -c).collect();
            let conj = self.group.bch(&self.group.bch(&s_inv, g.coords()), &s);
            for &i in &self.x_indices {
                worst = worst.max((conj[i] - g.coords()[i]).abs());
            }
        }
        let mut verdict = ValidationVerdict::new();
        verdict.push(Check::new("complemented commutator", worst, EXACT));
        verdict
    }

    /// Checks that `p(g1) = p(g2)` implies `g1⁻¹ g2 ∈ H`, on seeded samples.
    pub fn check_well_defined(&self, samples: usize, seed: u64) -> ValidationVerdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.group.dim();
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let g1 = random_point(&mut rng, n, 2.0);
            let h = random_point(&mut rng, n, 2.0);
            let h = self.h_element(&self.h_part(&h)).expect("length matches");
            let g2 = self.group.bch(g1.coords(), h.coords());
            // p(g1 h) = p(g1) is part of the claim
            let mut r = 0.0_f64;
            for &i in &self.x_indices {
                r = r.max((g2[i] - g1.coords()[i]).abs());
            }
            let diff = self.group.bch(g1.inverse().coords(), &g2);
            for &i in &self.x_indices {
                r = r.max(diff[i].abs());
            }
            worst = worst.max(r);
        }
        let mut verdict = ValidationVerdict::new();
        verdict.push(Check::new("coset well-definedness", worst, EXACT));
        verdict
    }
}

/// Unitary character `χ(h) = exp(i λ·h)` of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    weight: Vec<f64>,
}

impl Character {
    /// The weight must vanish on `[h, h]` for `χ` to be multiplicative.
    pub fn new(chart: &HomogeneousChart, weight: Vec<f64>) -> Result<Self, ChartError> {
        if weight.len() != chart.h_dim() {
            return Err(ChartError::WeightLength {
                expected: chart.h_dim(),
                found: weight.len(),
            });
        }
        if weight.iter().any(|w| !w.is_finite()) {
            return Err(LieError::NonFinite.into());
        }
        let algebra = chart.group().algebra();
        let mut worst = 0.0_f64;
        for &i in chart.h_indices() {
            for &j in chart.h_indices() {
                let pairing: f64 = chart
                    .h_indices()
                    .iter()
                    .zip(&weight)
                    .map(|(&k, w)| w * algebra.constant(i, j, k))
                    .sum();
                worst = worst.max(pairing.abs());
            }
        }
        if worst > EXACT {
            return Err(ChartError::NotACharacter(worst));
        }
        Ok(Character { weight })
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn eval(&self, h: &HPoint) -> Complex64 {
        self.eval_coords(&h.0)
    }

    pub(crate) fn eval_coords(&self, h: &[f64]) -> Complex64 {
        let phase: f64 = self.weight.iter().zip(h).map(|(w, x)| w * x).sum();
        Complex64::from_polar(1.0, phase)
    }
}
