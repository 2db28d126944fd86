//! Paren transform, operator norms and the bound verdicts.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relconv::bounds::*;
use relconv::grid::{BoxGrid, RepGrid};
use relconv::homogeneous::{Character, HomogeneousChart};
use relconv::lie::{GroupPoint, NilpotentAlgebra, NilpotentGroup};
use relconv::repkit::{KernelFamily, KernelOnX, SchrodingerRep, StateVector};
use relconv::Complex64;
use std::f64::consts::PI;

fn heisenberg() -> (HomogeneousChart, Character) {
    let chart = HomogeneousChart::heisenberg_center();
    let chi = Character::new(&chart, vec![-1.0]).unwrap();
    (chart, chi)
}

fn gaussian(grid: &BoxGrid) -> KernelOnX {
    KernelFamily::Gaussian {
        width: 1.0,
        amplitude: 1.0,
    }
    .sample(grid)
    .unwrap()
}

#[test]
fn gaussian_paren_against_doubled_resolution_quadrature() {
    // Oracle: the defining integral with the phase written out by hand,
    // h(x, g) = y u − x v, on a grid with twice the points.
    let (chart, chi) = heisenberg();
    let grid = BoxGrid::default_x_grid();
    let k = gaussian(&grid);
    let fine = grid.refined();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..16 {
        let (u, v, s) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-5.0..5.0));
        let ours = paren_transform(&chart, &chi, &k, &GroupPoint::new(vec![u, v, s]).unwrap()).unwrap();
        let oracle: Complex64 = (0..fine.len())
            .map(|node| {
                let p = fine.point(node);
                let w = fine.weight(node) * (-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp();
                Complex64::from_polar(w, -(p[1] * u - p[0] * v))
            })
            .sum();
        let closed = 2.0 * PI * (-(u * u + v * v) / 2.0).exp();
        assert!((ours - oracle).norm() < 1e-8, "{ours} {oracle}");
        assert!((ours - closed).norm() < 1e-6);
    }
}

#[test]
fn paren_is_constant_along_the_centre() {
    let (chart, chi) = heisenberg();
    let k = KernelFamily::band_limited(2).sample(&BoxGrid::cube(-3.0, 3.0, 20, 2).unwrap()).unwrap();
    for s in [-7.0, -1.0, 0.5, 12.0] {
        let a = paren_transform(&chart, &chi, &k, &GroupPoint::new(vec![0.4, -0.9, 0.0]).unwrap()).unwrap();
        let b = paren_transform(&chart, &chi, &k, &GroupPoint::new(vec![0.4, -0.9, s]).unwrap()).unwrap();
        assert!((a - b).norm() <= 1e-12);
    }
}

#[test]
fn real_even_kernels_have_real_paren() {
    let (chart, chi) = heisenberg();
    let k = KernelOnX::from_fn(BoxGrid::cube(-3.0, 3.0, 31, 2).unwrap(), |x| {
        Complex64::new((x[0] * x[1]).cos() * (-(x[0] * x[0]) - 0.5 * x[1] * x[1]).exp(), 0.0)
    });
    let fast = paren_transform_fast(&chart, &chi, &k).unwrap();
    for node in (0..fast.len()).step_by(53) {
        let direct = paren_transform(&chart, &chi, &k, &fast.points()[node]).unwrap();
        assert!(direct.im.abs() <= 1e-10);
        assert!(fast.values()[node].im.abs() <= 1e-10);
    }
}

#[test]
fn paren_sup_is_below_l1_norm() {
    let (chart, chi) = heisenberg();
    let grid = BoxGrid::default_x_grid();
    for seed in 0..5 {
        let k = KernelFamily::band_limited(seed).sample(&grid).unwrap();
        let fast = paren_transform_fast(&chart, &chi, &k).unwrap();
        assert!(fast.sup_norm() <= k.l1_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn fast_path_on_free_group_with_larger_h() {
    // Free step two on three generators with H = span(e2, e3, e4, e5):
    // X = span(e0, e1), and χ only sees e3.
    let group = NilpotentGroup::new(NilpotentAlgebra::free_step2_rank3()).unwrap();
    let chart = HomogeneousChart::new(group, vec![2, 3, 4, 5]).unwrap();
    let chi = Character::new(&chart, vec![0.0, 1.3, 0.0, 0.0]).unwrap();
    let k = KernelFamily::band_limited(5).sample(&BoxGrid::cube(-3.0, 3.0, 16, 2).unwrap()).unwrap();
    let fast = paren_transform_fast(&chart, &chi, &k).unwrap();
    let scale = fast.sup_norm();
    for node in (0..fast.len()).step_by(41) {
        let direct = paren_transform(&chart, &chi, &k, &fast.points()[node]).unwrap();
        assert!((direct - fast.values()[node]).norm() <= 1e-10 * scale);
    }
}

#[test]
fn operator_norm_matches_dense_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1, 2, 7, 16, 33] {
        let a = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let oracle = a.clone().singular_values().max();
        assert!((spectral_norm(&a).unwrap() - oracle).abs() <= 1e-10 * oracle.max(1.0));
    }
}

#[test]
fn verdicts_scale_linearly() {
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let phi = StateVector::gaussian(*rep.grid());
    let chi = rep.covariant_character();
    let f = KernelFamily::band_limited(7).sample(&BoxGrid::default_x_grid()).unwrap();
    let base = verify_prop_bound(&rep, rep.chart(), &chi, &f, &phi).unwrap();
    let alpha = 3.5;
    let scaled = verify_prop_bound(&rep, rep.chart(), &chi, &f.scaled(Complex64::new(alpha, 0.0)), &phi).unwrap();
    assert!((scaled.lhs - alpha * base.lhs).abs() < 1e-9 * scaled.lhs);
    assert!((scaled.rhs - alpha * base.rhs).abs() < 1e-9 * scaled.rhs);
    assert_eq!(scaled.pass, base.pass);
}

#[test]
fn phi_as_kernel_gives_box_indicator_symbol() {
    // f = Φ: fΦ⁻¹ is the indicator of the box, whose symbol peaks at the
    // identity with value equal to the box area.
    let rep = SchrodingerRep::new(1.0, RepGrid::default_grid()).unwrap();
    let phi = StateVector::gaussian(*rep.grid());
    let chi = rep.covariant_character();
    let grid = BoxGrid::default_x_grid();
    let values = compute_phi(&rep, &phi, &grid).unwrap();
    let f = KernelOnX::new(grid.clone(), values.values().to_vec()).unwrap();
    let verdict = verify_prop_bound(&rep, rep.chart(), &chi, &f, &phi).unwrap();
    assert!((verdict.rhs - 144.0).abs() < 1e-9, "{verdict}");
    assert!(verdict.pass);
    let lemma = verify_lemma_bound(&rep, rep.chart(), &chi, &f, &phi).unwrap();
    assert!((lemma.rhs - verdict.rhs).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn paren_of_delta_is_one(u in -5.0f64..5.0, v in -5.0f64..5.0, s in -5.0f64..5.0) {
        let (chart, chi) = heisenberg();
        let delta = KernelOnX::delta(BoxGrid::cube(-1.0, 1.0, 5, 2).unwrap(), &[0.0, 0.0]).unwrap();
        let value = paren_transform(&chart, &chi, &delta, &GroupPoint::new(vec![u, v, s]).unwrap()).unwrap();
        prop_assert!((value - 1.0).norm() < 1e-14);
    }

    #[test]
    fn power_iteration_on_diagonals(d in proptest::collection::vec(0.0f64..10.0, 1..12)) {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d.len(), d.iter().map(|x| Complex64::new(*x, 0.0))));
        let top = d.iter().cloned().fold(0.0, f64::max);
        prop_assert!((spectral_norm(&a).unwrap() - top).abs() <= 1e-10 * top.max(1.0));
    }
}
