//! Operator assembly and transforms against straight-line oracles.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relconv::bounds::compute_phi;
use relconv::grid::{Axis, BoxGrid, RepGrid};
use relconv::homogeneous::XPoint;
use relconv::lie::{GroupPoint, NilpotentGroup};
use relconv::repkit::*;
use relconv::Complex64;
use std::f64::consts::PI;

fn gp(v: &[f64]) -> GroupPoint {
    GroupPoint::new(v.to_vec()).unwrap()
}

/// `π(g)` as a dense matrix, one column per grid basis vector.
fn dense(rep: &SchrodingerRep, g: &GroupPoint) -> DMatrix<Complex64> {
    let n = rep.grid().len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = rep.apply(g, &StateVector::new(*rep.grid(), e).unwrap()).unwrap().state;
        for (i, z) in col.samples().iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

#[test]
fn relative_convolution_matches_node_by_node_sum() {
    let rep = SchrodingerRep::new(0.7, RepGrid::new(-6.0, 6.0, 32).unwrap()).unwrap();
    let grid = BoxGrid::cube(-2.0, 2.0, 9, 2).unwrap();
    let k = KernelFamily::band_limited(11).sample(&grid).unwrap();
    let mut oracle = DMatrix::zeros(32, 32);
    for node in 0..grid.len() {
        let x = grid.point(node);
        let weight = k.samples()[node] * grid.weight(node);
        oracle += dense(&rep, &gp(&[x[0], x[1], 0.0])) * weight;
    }
    let fast = relative_convolution(&rep, &k).unwrap();
    let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = fast
        .entries()
        .iter()
        .zip(oracle.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff <= 1e-13 * scale, "{diff:e}");
}

#[test]
fn integrated_rep_matches_node_by_node_sum_over_g() {
    let rep = SchrodingerRep::new(1.0, RepGrid::new(-6.0, 6.0, 24).unwrap()).unwrap();
    let grid = BoxGrid::new(vec![
        Axis::new(-1.5, 1.5, 5).unwrap(),
        Axis::new(-1.5, 1.5, 5).unwrap(),
        Axis::new(-2.0, 2.0, 7).unwrap(),
    ])
    .unwrap();
    let k = KernelOnG::from_fn(grid.clone(), |p| Complex64::new(p[0] - p[2], p[1] * p[2]));
    let mut oracle = DMatrix::zeros(24, 24);
    for node in 0..grid.len() {
        oracle += dense(&rep, &gp(&grid.point(node))) * (k.samples()[node] * grid.weight(node));
    }
    let fast = integrated_rep(&rep, &k).unwrap();
    let diff = fast
        .entries()
        .iter()
        .zip(oracle.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-12, "{diff:e}");
}

#[test]
fn phi_matches_independent_quadrature() {
    // ⟨φ, π(u, v, 0) φ⟩ = ∫ φ(t) φ(t + v) e^{iλ(u t + u v / 2)} dt for the
    // normalized Gaussian, by a dense trapezoid rule on [−20, 20].
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let phi = StateVector::gaussian(*rep.grid());
    let grid = BoxGrid::cube(-4.0, 4.0, 9, 2).unwrap();
    let values = compute_phi(&rep, &phi, &grid).unwrap();
    let gauss = |t: f64| PI.powf(-0.25) * (-t * t / 2.0).exp();
    let m = 8001;
    let h = 40.0 / (m - 1) as f64;
    for (g, value) in values.points().iter().zip(values.values()) {
        let (u, v) = (g.coords()[0], g.coords()[1]);
        let quad: Complex64 = (0..m)
            .map(|i| {
                let t = -20.0 + i as f64 * h;
                let w = if i == 0 || i == m - 1 { 0.5 } else { 1.0 };
                Complex64::from_polar(w * gauss(t) * gauss(t + v), u * t + u * v / 2.0)
            })
            .sum::<Complex64>()
            * h;
        assert!((value - quad).norm() < 1e-8, "({u}, {v}): {value} vs {quad}");
        assert!((value.norm() - (-(u * u + v * v) / 4.0).exp()).abs() < 1e-8);
    }
}

#[test]
fn wavelet_image_is_covariant() {
    // F(g h) = χ(h) F(g) for h in the centre.
    let rep = SchrodingerRep::new(1.4, RepGrid::default_grid()).unwrap();
    let chi = rep.covariant_character();
    let group = NilpotentGroup::heisenberg();
    let phi = StateVector::gaussian(*rep.grid());
    let v = StateVector::hermite(*rep.grid(), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let g = gp(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let s = rng.random_range(-3.0..3.0);
        let gh = group.multiply(&g, &gp(&[0.0, 0.0, s])).unwrap();
        let lhs = wavelet_transform(&rep, &v, &phi, &gh).unwrap();
        let rhs = chi.eval(&relconv::homogeneous::HPoint(vec![s])) * wavelet_transform(&rep, &v, &phi, &g).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }
}

#[test]
fn lambda_rho_action_is_two_sided_shift() {
    // (Λ⊗R)(s(x)) F(g) = F(s(x)⁻¹ g s(x)) on the wavelet image.
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let chi = rep.covariant_character();
    let group = NilpotentGroup::heisenberg();
    let phi = StateVector::gaussian(*rep.grid());
    let v = StateVector::hermite(*rep.grid(), 2);
    let grid = BoxGrid::cube(-2.0, 2.0, 7, 2).unwrap();
    let f = wavelet_transform_on_grid(&rep, &v, &phi, &grid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let acted = lambda_rho_action(rep.chart(), &chi, &XPoint(x.to_vec()), &f).unwrap();
        let a = gp(&[x[0], x[1], 0.0]);
        for (g, value) in acted.points().iter().zip(acted.values()) {
            let direct = wavelet_transform(&rep, &v, &phi, &group.conjugate(&a, g).unwrap()).unwrap();
            assert!((value - direct).norm() < 1e-6, "{value} {direct}");
        }
    }
}

#[test]
fn contravariant_transform_agrees_with_operator() {
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let grid = BoxGrid::new(vec![
        Axis::new(-4.0, 4.0, 24).unwrap(),
        Axis::new(-4.0, 4.0, 24).unwrap(),
        Axis::new(-5.0, 5.0, 21).unwrap(),
    ])
    .unwrap();
    let k = KernelOnG::from_fn(grid, |p| {
        Complex64::new((-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0).exp(), 0.0)
    });
    let psi = StateVector::hermite(*rep.grid(), 1);
    let direct = contravariant_transform_on_g(&rep, &k, &psi).unwrap();
    let via = integrated_rep(&rep, &k).unwrap().apply(&psi).unwrap();
    assert!(direct.distance(&via).unwrap() < 1e-12);
}

#[test]
fn reconstruction_of_the_ground_state() {
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let phi = StateVector::gaussian(*rep.grid());
    let cal = Reconstruction::calibrate(&rep, &phi, &BoxGrid::default_x_grid()).unwrap();
    let v = StateVector::hermite(*rep.grid(), 1);
    assert!(cal.residual(&rep, &phi, &v).unwrap() < 1e-4);
}
