use std::fmt;

use num_complex::Complex64;

use super::{operator_norm, paren_transform, paren_transform_fast, BoundError};
use crate::coefficient::CoefficientFunction;
use crate::grid::{BoxGrid, RepGrid};
use crate::homogeneous::{Character, HomogeneousChart};
use crate::repkit::{relative_convolution, wavelet_transform_on_grid, KernelOnX, RepError, SchrodingerRep, StateVector};
use crate::tolerances::{DEGENERATE_WAVELET, EXACT};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Direct evaluation of the Lemma side uses every second lattice frequency
/// with `|m_d| ≤ 2 · LEMMA_HALF_WIDTH`. The lattice spacing depends only on the
/// box, so the same `G` points are used at both resolutions.
const LEMMA_HALF_WIDTH: i64 = 16;

/// `Φ = W_φ φ`, sampled at `s(x)` on a 2-D `X`-grid or at `(u, v, s)` on a
/// 3-D `G`-grid. Fails when any sample is below `1e-300` in modulus.
pub fn compute_phi(rep: &SchrodingerRep, phi: &StateVector, grid: &BoxGrid) -> Result<CoefficientFunction, BoundError> {
    let values = phi_values(rep, phi, grid)?;
    if let Some((node, modulus)) = values.min_abs() {
        if !(modulus >= DEGENERATE_WAVELET) {
            return Err(BoundError::DegenerateWavelet { node, modulus });
        }
    }
    Ok(values)
}

fn phi_values(rep: &SchrodingerRep, phi: &StateVector, grid: &BoxGrid) -> Result<CoefficientFunction, BoundError> {
    let norm = phi.norm();
    if (norm - 1.0).abs() > EXACT {
        return Err(BoundError::NotNormalized(norm));
    }
    match grid.dims() {
        2 => Ok(wavelet_transform_on_grid(rep, phi, phi, grid)?),
        3 => {
            let axes = grid.axes();
            let x_grid = BoxGrid::new(vec![axes[0], axes[1]])?;
            let on_x = wavelet_transform_on_grid(rep, phi, phi, &x_grid)?;
            let s_axis = axes[2];
            let mut points = Vec::with_capacity(grid.len());
            let mut values = Vec::with_capacity(grid.len());
            for node in 0..grid.len() {
                let p = grid.point(node);
                // π(u, v, s) = e^{iλs} π(u, v, 0), conjugated by the inner product.
                let central = Complex64::from_polar(1.0, -rep.hbar() * p[2]);
                values.push(on_x.values()[node / s_axis.n] * central);
                points.push(crate::lie::GroupPoint::from_vec_unchecked(p));
            }
            Ok(CoefficientFunction::new(points, values))
        }
        found => Err(RepError::KernelDimension { expected: 2, found }.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `‖π(f)‖ ≤ ‖Λ⊗R(fΦ⁻¹)‖`, the right side realized as multiplication by
    /// `⌢(fΦ⁻¹)` and evaluated by direct quadrature on a sub-lattice.
    Lemma,
    /// `‖π_χ(f)‖ ≤ ‖⌢(fΦ⁻¹)‖_∞` with the sup over the full FFT lattice.
    Proposition,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Lemma => "lemma-bound",
            BoundKind::Proposition => "prop-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundVerdict {
    pub kind: BoundKind,
    /// Operator norm of the relative convolution.
    pub lhs: f64,
    /// Sup norm of the symbol side.
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    /// Largest shift of either side between the two resolutions; zero for a
    /// single-resolution verdict.
    pub discretization_estimate: f64,
    /// `(lhs, rhs)` at doubled resolution, if computed.
    pub refined: Option<(f64, f64)>,
    /// `Φ⁻¹` is only evaluated on the support of `f`; smallest `|Φ|` there.
    pub min_phi_on_support: f64,
    pub support_nodes: usize,
    /// The kernel reaches translations longer than half the rep window.
    pub truncation_warning: bool,
    pub pass: bool,
}

impl BoundVerdict {
    fn single(kind: BoundKind, sides: Sides) -> Self {
        BoundVerdict {
            kind,
            lhs: sides.lhs,
            rhs: sides.rhs,
            margin: sides.rhs - sides.lhs,
            discretization_estimate: 0.0,
            refined: None,
            min_phi_on_support: sides.min_phi,
            support_nodes: sides.support,
            truncation_warning: sides.warning,
            pass: sides.lhs <= sides.rhs,
        }
    }

    fn refined(kind: BoundKind, coarse: Sides, fine: Sides) -> Self {
        let eps = (fine.lhs - coarse.lhs).abs().max((fine.rhs - coarse.rhs).abs());
        BoundVerdict {
            kind,
            lhs: coarse.lhs,
            rhs: coarse.rhs,
            margin: coarse.rhs - coarse.lhs,
            discretization_estimate: eps,
            refined: Some((fine.lhs, fine.rhs)),
            min_phi_on_support: coarse.min_phi.min(fine.min_phi),
            support_nodes: coarse.support,
            truncation_warning: coarse.warning || fine.warning,
            pass: coarse.lhs <= coarse.rhs + eps && fine.lhs <= fine.rhs + eps,
        }
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: lhs={:e} rhs={:e} margin={:e} eps_disc={:e} [Φ⁻¹ on supp f, min|Φ|={:e}] {}",
            self.kind.name(),
            self.lhs,
            self.rhs,
            self.margin,
            self.discretization_estimate,
            self.min_phi_on_support,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Sides {
    lhs: f64,
    rhs: f64,
    min_phi: f64,
    support: usize,
    warning: bool,
}

/// `f Φ⁻¹` on the support of `f`, zero elsewhere.
fn divide_by_phi(rep: &SchrodingerRep, f: &KernelOnX, phi: &StateVector) -> Result<(KernelOnX, f64, usize), BoundError> {
    let values = phi_values(rep, phi, f.grid())?;
    let mut min_phi = f64::INFINITY;
    let mut support = 0;
    let mut quotient = vec![ZERO; f.grid().len()];
    for (node, (fv, pv)) in f.samples().iter().zip(values.values()).enumerate() {
        if *fv == ZERO {
            continue;
        }
        let modulus = pv.norm();
        if !(modulus >= DEGENERATE_WAVELET) {
            return Err(BoundError::DegenerateWavelet { node, modulus });
        }
        min_phi = min_phi.min(modulus);
        support += 1;
        quotient[node] = fv / pv;
    }
    Ok((KernelOnX::new(f.grid().clone(), quotient)?, min_phi, support))
}

fn lemma_rhs(chart: &HomogeneousChart, chi: &Character, k: &KernelOnX) -> Result<f64, BoundError> {
    if k.is_zero() {
        return Ok(0.0);
    }
    let lattice = paren_transform_fast(chart, chi, k)?;
    let padded: Vec<usize> = k.grid().axes().iter().map(|a| 2 * a.n).collect();
    let mut sup = 0.0_f64;
    'nodes: for (flat, g) in lattice.points().iter().enumerate() {
        let mut rest = flat;
        for d in (0..padded.len()).rev() {
            let m = rest % padded[d];
            rest /= padded[d];
            let signed = m as i64 - (padded[d] / 2) as i64;
            if signed % 2 != 0 || signed.abs() > 2 * LEMMA_HALF_WIDTH {
                continue 'nodes;
            }
        }
        sup = sup.max(paren_transform(chart, chi, k, g)?.norm());
    }
    Ok(sup)
}

fn sides(
    kind: BoundKind,
    rep: &SchrodingerRep,
    chart: &HomogeneousChart,
    chi: &Character,
    f: &KernelOnX,
    phi: &StateVector,
) -> Result<Sides, BoundError> {
    let op = relative_convolution(rep, f)?;
    let lhs = operator_norm(&op)?;
    let (quotient, min_phi, support) = divide_by_phi(rep, f, phi)?;
    let rhs = match kind {
        BoundKind::Lemma => lemma_rhs(chart, chi, &quotient)?,
        BoundKind::Proposition if quotient.is_zero() => 0.0,
        BoundKind::Proposition => paren_transform_fast(chart, chi, &quotient)?.sup_norm(),
    };
    Ok(Sides {
        lhs,
        rhs,
        min_phi,
        support,
        warning: op.truncation_warning(),
    })
}

/// Single-resolution check of `‖π(f)‖ ≤ ‖Λ⊗R(fΦ⁻¹)‖`.
pub fn verify_lemma_bound(
    rep: &SchrodingerRep,
    chart: &HomogeneousChart,
    chi: &Character,
    f: &KernelOnX,
    phi: &StateVector,
) -> Result<BoundVerdict, BoundError> {
    Ok(BoundVerdict::single(BoundKind::Lemma, sides(BoundKind::Lemma, rep, chart, chi, f, phi)?))
}

/// Single-resolution check of `‖π_χ(f)‖ ≤ ‖⌢(fΦ⁻¹)‖_∞`.
pub fn verify_prop_bound(
    rep: &SchrodingerRep,
    chart: &HomogeneousChart,
    chi: &Character,
    f: &KernelOnX,
    phi: &StateVector,
) -> Result<BoundVerdict, BoundError> {
    Ok(BoundVerdict::single(
        BoundKind::Proposition,
        sides(BoundKind::Proposition, rep, chart, chi, f, phi)?,
    ))
}

/// Two-resolution verification. The kernel and the mother wavelet are
/// resampled on the refined grids: the `X`-box is kept and its points
/// doubled, the rep grid is [`RepGrid::refined`].
pub struct Refinement<'a> {
    pub kernel: &'a (dyn Fn(&BoxGrid) -> Result<KernelOnX, RepError> + Sync),
    pub wavelet: &'a (dyn Fn(&RepGrid) -> Result<StateVector, RepError> + Sync),
}

impl Refinement<'_> {
    pub fn verify(
        &self,
        kind: BoundKind,
        rep: &SchrodingerRep,
        chart: &HomogeneousChart,
        chi: &Character,
        grid: &BoxGrid,
    ) -> Result<BoundVerdict, BoundError> {
        let coarse = sides(kind, rep, chart, chi, &(self.kernel)(grid)?, &(self.wavelet)(rep.grid())?)?;
        let fine_rep = rep.refined();
        let fine_grid = grid.refined();
        let fine = sides(
            kind,
            &fine_rep,
            chart,
            chi,
            &(self.kernel)(&fine_grid)?,
            &(self.wavelet)(fine_rep.grid())?,
        )?;
        Ok(BoundVerdict::refined(kind, coarse, fine))
    }
}
