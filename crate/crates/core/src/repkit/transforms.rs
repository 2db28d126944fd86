use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{KernelOnG, KernelOnX, OperatorMatrix, RepError, SchrodingerRep, StateVector};
use crate::coefficient::CoefficientFunction;
use crate::grid::BoxGrid;
use crate::homogeneous::{Character, HomogeneousChart, XPoint};
use crate::lie::GroupPoint;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `[W_φ v](g) = ⟨v, π(g) φ⟩`.
pub fn wavelet_transform(
    rep: &SchrodingerRep,
    v: &StateVector,
    phi: &StateVector,
    g: &GroupPoint,
) -> Result<Complex64, RepError> {
    rep.check_state(v)?;
    let moved = rep.apply(g, phi)?.state;
    Ok(v.inner_unchecked(&moved))
}

fn check_x_grid(grid: &BoxGrid) -> Result<(), RepError> {
    if grid.dims() != 2 {
        return Err(RepError::KernelDimension {
            expected: 2,
            found: grid.dims(),
        });
    }
    Ok(())
}

/// `W_φ v` sampled at `s(x)` for every node `x` of a 2-D grid on `X`.
pub fn wavelet_transform_on_grid(
    rep: &SchrodingerRep,
    v: &StateVector,
    phi: &StateVector,
    grid: &BoxGrid,
) -> Result<CoefficientFunction, RepError> {
    check_x_grid(grid)?;
    rep.check_state(v)?;
    rep.check_state(phi)?;
    let (u_axis, v_axis) = (grid.axes()[0], grid.axes()[1]);
    let h = rep.grid().spacing();
    let t = rep.grid().points();
    let mut values = vec![ZERO; grid.len()];
    for jv in 0..v_axis.n {
        let shift = v_axis.point(jv);
        let moved = rep.translate(phi.samples(), shift);
        for ju in 0..u_axis.n {
            let u = u_axis.point(ju);
            let acc: Complex64 = v
                .samples()
                .iter()
                .zip(&moved)
                .zip(&t)
                .map(|((a, b), &ti)| a * (rep.phase(u, shift, 0.0, ti) * b).conj())
                .sum();
            values[ju * v_axis.n + jv] = acc * h;
        }
    }
    Ok(CoefficientFunction::on_section(rep.chart(), grid, values))
}

/// Per translation column `v` of the kernel grid, the diagonal
/// `d_v(t) = Σ_u w(u,v) k(u,v) e^{iλ(−u t − u v/2)}`; all-zero columns are
/// skipped.
fn column_diagonals(rep: &SchrodingerRep, k: &KernelOnX) -> Vec<(f64, Vec<Complex64>)> {
    let grid = k.grid();
    let (u_axis, v_axis) = (grid.axes()[0], grid.axes()[1]);
    let t = rep.grid().points();
    let mut columns = Vec::new();
    for jv in 0..v_axis.n {
        let shift = v_axis.point(jv);
        let mut d = vec![ZERO; t.len()];
        let mut any = false;
        for ju in 0..u_axis.n {
            let node = ju * v_axis.n + jv;
            let weight = k.samples()[node] * grid.weight(node);
            if weight == ZERO {
                continue;
            }
            any = true;
            let u = u_axis.point(ju);
            for (di, &ti) in d.iter_mut().zip(&t) {
                *di += weight * rep.phase(u, shift, 0.0, ti);
            }
        }
        if any {
            columns.push((shift, d));
        }
    }
    columns
}

fn exceeds_half_window(rep: &SchrodingerRep, columns: &[(f64, Vec<Complex64>)]) -> bool {
    let half = 0.5 * (rep.grid().t_max() - rep.grid().t_min());
    columns.iter().any(|(shift, _)| shift.abs() > half)
}

/// Relative convolution `π(k) = ∫_X k(x) π(s(x)) dx` by the trapezoid rule.
///
/// Nodes are grouped by translation: `π(k) = Σ_v diag(d_v) T_v` with `T_v`
/// the circulant band-limited shift.
pub fn relative_convolution(rep: &SchrodingerRep, k: &KernelOnX) -> Result<OperatorMatrix, RepError> {
    check_x_grid(k.grid())?;
    let n = rep.grid().len();
    let columns = column_diagonals(rep, k);
    let warning = exceeds_half_window(rep, &columns);
    let mut m = DMatrix::from_element(n, n, ZERO);
    for (shift, d) in &columns {
        let tau = rep.translation_kernel(*shift);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] += d[i] * tau[(i + n - j) % n];
            }
        }
    }
    Ok(OperatorMatrix::new(m, *rep.grid())?.with_warning(warning))
}

/// Integrates out the `H` axis of a kernel on `G = X × H`:
/// `k_X(x) = Σ_h w(h) k(x, h) e^{iλ h'}`, with `h'` the centre coordinate of
/// `s(x)⁻¹ g`. Then `π(k) = π(k_X)` as a relative convolution.
pub fn fold_center(rep: &SchrodingerRep, k: &KernelOnG) -> Result<KernelOnX, RepError> {
    let grid = k.grid();
    if grid.dims() != 3 {
        return Err(RepError::KernelDimension {
            expected: 3,
            found: grid.dims(),
        });
    }
    let axes = grid.axes();
    let x_grid = BoxGrid::new(vec![axes[0], axes[1]])?;
    let s_axis = axes[2];
    let chart = rep.chart();
    let group = chart.group();
    let mut folded = vec![ZERO; x_grid.len()];
    for (flat_x, slot) in folded.iter_mut().enumerate() {
        let x = x_grid.point(flat_x);
        let s_inv: Vec<f64> = chart.section_coords(&x).iter().map(|c| -c).collect();
        for js in 0..s_axis.n {
            let value = k.samples()[flat_x * s_axis.n + js];
            if value == ZERO {
                continue;
            }
            let g = [x[0], x[1], s_axis.point(js)];
            let h = group.bch(&s_inv, &g)[2];
            *slot += value * s_axis.weight(js) * Complex64::from_polar(1.0, rep.hbar() * h);
        }
    }
    KernelOnX::new(x_grid, folded)
}

/// Integrated representation `π(k) = ∫_G k(g) π(g) dg` by the trapezoid rule.
pub fn integrated_rep(rep: &SchrodingerRep, k: &KernelOnG) -> Result<OperatorMatrix, RepError> {
    relative_convolution(rep, &fold_center(rep, k)?)
}

/// Contravariant transform `M_ψ(k) = π(k) ψ` for a kernel on `X`, accumulated
/// directly without forming the matrix.
pub fn contravariant_transform(
    rep: &SchrodingerRep,
    k: &KernelOnX,
    psi: &StateVector,
) -> Result<StateVector, RepError> {
    check_x_grid(k.grid())?;
    rep.check_state(psi)?;
    let mut out = vec![ZERO; rep.grid().len()];
    for (shift, d) in column_diagonals(rep, k) {
        let moved = rep.translate(psi.samples(), shift);
        for ((o, di), m) in out.iter_mut().zip(&d).zip(&moved) {
            *o += di * m;
        }
    }
    Ok(StateVector::from_parts(*rep.grid(), out))
}

/// Contravariant transform for a kernel on `G`.
pub fn contravariant_transform_on_g(
    rep: &SchrodingerRep,
    k: &KernelOnG,
    psi: &StateVector,
) -> Result<StateVector, RepError> {
    contravariant_transform(rep, &fold_center(rep, k)?, psi)
}

/// `(Λ⊗R)(s(x))` on the `χ`-covariant class, realized as multiplication:
/// `F(g) ↦ χ(h(x, g)) F(g)`.
pub fn lambda_rho_action(
    chart: &HomogeneousChart,
    chi: &Character,
    x: &XPoint,
    f: &CoefficientFunction,
) -> Result<CoefficientFunction, RepError> {
    let values = f
        .points()
        .iter()
        .zip(f.values())
        .map(|(g, value)| Ok(chi.eval(&chart.h_of_xg(x, g)?) * value))
        .collect::<Result<Vec<_>, RepError>>()?;
    Ok(f.with_values(values))
}

/// Reconstruction `M_φ W_φ = c ⟨φ, φ⟩ I` with the constant `c` calibrated
/// once on `φ` itself for a given `λ` and `X`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    constant: Complex64,
    grid: BoxGrid,
}

impl Reconstruction {
    pub fn calibrate(rep: &SchrodingerRep, phi: &StateVector, grid: &BoxGrid) -> Result<Self, RepError> {
        let mut cal = Reconstruction {
            constant: Complex64::new(1.0, 0.0),
            grid: grid.clone(),
        };
        let raw = cal.round_trip(rep, phi, phi)?;
        let pp = phi.inner(phi)?;
        let constant = raw.inner(phi)? / (pp * pp);
        if constant.norm() == 0.0 || !constant.re.is_finite() {
            return Err(RepError::DegenerateCalibration);
        }
        cal.constant = constant;
        Ok(cal)
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    /// `M_φ(W_φ v)`, uncalibrated.
    pub fn round_trip(&self, rep: &SchrodingerRep, phi: &StateVector, v: &StateVector) -> Result<StateVector, RepError> {
        let w = wavelet_transform_on_grid(rep, v, phi, &self.grid)?;
        let kernel = KernelOnX::new(self.grid.clone(), w.values().to_vec())?;
        contravariant_transform(rep, &kernel, phi)
    }

    /// `M_φ(W_φ v) / c`.
    pub fn reconstruct(&self, rep: &SchrodingerRep, phi: &StateVector, v: &StateVector) -> Result<StateVector, RepError> {
        Ok(self.round_trip(rep, phi, v)?.scaled(1.0 / self.constant))
    }

    /// `‖M_φ(W_φ v)/c − ⟨φ,φ⟩ v‖ / ‖v‖`.
    pub fn residual(&self, rep: &SchrodingerRep, phi: &StateVector, v: &StateVector) -> Result<f64, RepError> {
        let rebuilt = self.reconstruct(rep, phi, v)?;
        let target = v.scaled(phi.inner(phi)?);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(RepError::ZeroVector);
        }
        Ok(rebuilt.distance(&target)? / norm)
    }
}
