//! Suite execution.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use relconv::bounds::{verify_lemma_bound, verify_prop_bound, BoundKind, BoundVerdict, Refinement};
use relconv::grid::{Axis, BoxGrid, RepGrid};
use relconv::homogeneous::HomogeneousChart;
use relconv::lie::{GroupPoint, NilpotentAlgebra, NilpotentGroup};
use relconv::repkit::{
    contravariant_transform_on_g, wavelet_transform, KernelFamily, KernelOnG, Reconstruction, SchrodingerRep,
    StateVector,
};
use relconv::verdict::ValidationVerdict;

use crate::config::{ScenarioConfig, Suite};
use crate::report::{CsvRow, Record, RunReport, Skipped};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Replaces the config's suite list when set.
    pub suites: Option<Vec<Suite>>,
    /// Two-resolution pass: refined reconstruction and `ε_disc` for the
    /// single-kernel bound suites. The sweep always uses two resolutions.
    pub refine: bool,
    /// Replaces `params.family_size` when set.
    pub family_size: Option<usize>,
}

impl RunOptions {
    pub fn with_suites(suites: Vec<Suite>) -> Self {
        RunOptions {
            suites: Some(suites),
            ..Default::default()
        }
    }
}

/// Runs the selected suites in [`Suite::ALL`] order. Randomness is seeded
/// from the config, so equal configs give equal reports.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> RunReport {
    let start = Instant::now();
    let mut selected = opts.suites.clone().unwrap_or_else(|| cfg.suites.clone());
    selected.sort();
    selected.dedup();
    let mut report = RunReport {
        config: cfg.clone(),
        records: Vec::new(),
        skipped: Vec::new(),
        csv_rows: Vec::new(),
        wall_clock: Default::default(),
    };
    if selected.is_empty() {
        return report;
    }

    let group = match cfg.algebra() {
        Ok(algebra) => {
            let verdict = algebra.validate();
            if selected.contains(&Suite::Algebra) {
                push_verdict(&mut report, Suite::Algebra, "", &verdict, cfg.tolerances.algebra);
            }
            let valid = verdict.checks.iter().all(|c| c.residual <= cfg.tolerances.algebra);
            match NilpotentGroup::new(algebra) {
                Ok(group) if valid => {
                    if selected.contains(&Suite::Algebra) {
                        let residual = group.associativity_residual(cfg.params.associativity_samples, 2.0, cfg.seed);
                        report.records.push(Record::residual(
                            Suite::Algebra,
                            format!("associativity ({} triples)", cfg.params.associativity_samples),
                            residual,
                            cfg.tolerances.algebra,
                        ));
                    }
                    Some(group)
                }
                Ok(_) => None,
                Err(e) => {
                    if selected.contains(&Suite::Algebra) {
                        report.records.push(Record::error(Suite::Algebra, "group", e.to_string()));
                    }
                    None
                }
            }
        }
        Err(e) => {
            if selected.contains(&Suite::Algebra) {
                report.records.push(Record::error(Suite::Algebra, "structure constants", e.to_string()));
            }
            None
        }
    };
    let Some(group) = group else {
        for &suite in selected.iter().filter(|s| **s != Suite::Algebra) {
            report.skipped.push(Skipped {
                suite,
                reason: "algebra validation failed".into(),
            });
        }
        report.wall_clock = start.elapsed();
        return report;
    };

    if selected.contains(&Suite::Ccp) {
        run_ccp(cfg, &group, &mut report);
    }

    let heisenberg = group.algebra().constants() == NilpotentAlgebra::heisenberg().constants()
        && cfg.h_indices() == [2];
    let rep_suites: Vec<Suite> = selected
        .iter()
        .copied()
        .filter(|s| !matches!(s, Suite::Algebra | Suite::Ccp))
        .collect();
    if !heisenberg {
        for suite in rep_suites {
            report.skipped.push(Skipped {
                suite,
                reason: "needs the Heisenberg algebra with H = centre".into(),
            });
        }
        report.wall_clock = start.elapsed();
        return report;
    }
    let setup = match Setup::new(cfg) {
        Ok(s) => s,
        Err(message) => {
            for suite in rep_suites {
                report.records.push(Record::error(suite, "setup", message.clone()));
            }
            report.wall_clock = start.elapsed();
            return report;
        }
    };
    for suite in rep_suites {
        match suite {
            Suite::Reconstruction => run_reconstruction(cfg, &setup, opts.refine, &mut report),
            Suite::Intertwine => run_intertwine(cfg, &setup, &mut report),
            Suite::LemmaBound => run_single_bound(cfg, &setup, BoundKind::Lemma, opts.refine, &mut report),
            Suite::PropBound => run_single_bound(cfg, &setup, BoundKind::Proposition, opts.refine, &mut report),
            Suite::Sweep => run_sweep(
                cfg,
                &setup,
                opts.family_size.unwrap_or(cfg.params.family_size),
                &mut report,
            ),
            Suite::Algebra | Suite::Ccp => unreachable!(),
        }
    }
    report.wall_clock = start.elapsed();
    report
}

/// Runs only the sweep suite over `family_size` kernels.
pub fn sweep(cfg: &ScenarioConfig, family_size: usize) -> RunReport {
    run_scenario(
        cfg,
        &RunOptions {
            suites: Some(vec![Suite::Sweep]),
            refine: true,
            family_size: Some(family_size),
        },
    )
}

fn push_verdict(report: &mut RunReport, suite: Suite, prefix: &str, verdict: &ValidationVerdict, tolerance: f64) {
    for check in &verdict.checks {
        report
            .records
            .push(Record::residual(suite, format!("{prefix}{}", check.name), check.residual, tolerance));
    }
}

fn one_based(h: &[usize]) -> String {
    let items: Vec<String> = h.iter().map(|i| (i + 1).to_string()).collect();
    format!("H={{{}}}", items.join(","))
}

fn run_ccp(cfg: &ScenarioConfig, group: &NilpotentGroup, report: &mut RunReport) {
    let mut charts = vec![cfg.h_indices()];
    charts.extend(cfg.extra_h());
    for h in charts {
        let label = one_based(&h);
        match HomogeneousChart::new(group.clone(), h) {
            Ok(chart) => {
                let samples = cfg.params.ccp_samples;
                let prefix = format!("{label} ");
                push_verdict(report, Suite::Ccp, &prefix, &chart.check_ccp(samples, cfg.seed), cfg.tolerances.ccp);
                push_verdict(
                    report,
                    Suite::Ccp,
                    &prefix,
                    &chart.check_well_defined(samples, cfg.seed),
                    cfg.tolerances.ccp,
                );
            }
            Err(e) => report.records.push(Record::error(Suite::Ccp, label, e.to_string())),
        }
    }
}

struct Setup {
    rep: SchrodingerRep,
    x_grid: BoxGrid,
    phi: StateVector,
}

impl Setup {
    fn new(cfg: &ScenarioConfig) -> Result<Self, String> {
        let rep = SchrodingerRep::new(cfg.rep.lambda, cfg.rep_grid()).map_err(|e| e.to_string())?;
        let x_grid = cfg.x_grid().map_err(|e| e.to_string())?;
        let phi = StateVector::gaussian(*rep.grid());
        Ok(Setup { rep, x_grid, phi })
    }
}

/// `(label, vector)` on `grid` for the configured Hermite test vectors.
fn hermite_vectors(cfg: &ScenarioConfig, grid: RepGrid) -> Vec<(String, StateVector)> {
    let mut out: Vec<(String, StateVector)> = cfg
        .params
        .hermite_orders
        .iter()
        .map(|&n| (format!("h{n}"), StateVector::hermite(grid, n)))
        .collect();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for &n in &cfg.params.hermite_pairs {
        let pair = StateVector::hermite(grid, n)
            .scaled(Complex64::new(r, 0.0))
            .axpy(Complex64::new(0.0, r), &StateVector::hermite(grid, n + 1))
            .expect("same grid");
        out.push((format!("(h{n}+i h{})/sqrt2", n + 1), pair));
    }
    out
}

fn run_reconstruction(cfg: &ScenarioConfig, setup: &Setup, refine: bool, report: &mut RunReport) {
    let suite = Suite::Reconstruction;
    let tol = cfg.tolerances.reconstruction;
    let coarse = match Reconstruction::calibrate(&setup.rep, &setup.phi, &setup.x_grid) {
        Ok(c) => c,
        Err(e) => {
            report.records.push(Record::error(suite, "calibration", e.to_string()));
            return;
        }
    };
    let fine_rep = setup.rep.refined();
    let fine_phi = StateVector::gaussian(*fine_rep.grid());
    let fine = if refine {
        match Reconstruction::calibrate(&fine_rep, &fine_phi, &setup.x_grid.refined_extended()) {
            Ok(c) => Some(c),
            Err(e) => {
                report.records.push(Record::error(suite, "refined calibration", e.to_string()));
                None
            }
        }
    } else {
        None
    };
    let fine_vectors = hermite_vectors(cfg, *fine_rep.grid());
    for (i, (label, v)) in hermite_vectors(cfg, *setup.rep.grid()).into_iter().enumerate() {
        let residual = match coarse.residual(&setup.rep, &setup.phi, &v) {
            Ok(r) => r,
            Err(e) => {
                report.records.push(Record::error(suite, label, e.to_string()));
                continue;
            }
        };
        let mut record = Record::residual(suite, label.clone(), residual, tol);
        if i == 0 {
            record = record.with_note(format!("calibrated c={:e}", coarse.constant().re));
        }
        report.records.push(record);
        if let Some(fine) = &fine {
            match fine.residual(&fine_rep, &fine_phi, &fine_vectors[i].1) {
                Ok(r) => report.records.push(Record::residual(
                    suite,
                    format!("{label} refined"),
                    r,
                    residual / cfg.tolerances.refine_gain,
                )),
                Err(e) => report.records.push(Record::error(suite, format!("{label} refined"), e.to_string())),
            }
        }
    }
}

/// Residuals of the three intertwining identities over seeded `(g0, g, v)`.
pub struct IntertwiningResiduals {
    /// `|W_φ(π(g0)v)(g) − W_φ v(g0⁻¹ g)|`.
    pub covariant_left: f64,
    /// `|W_φ v(g g0) − W_{π(g0)φ} v(g)|`.
    pub covariant_right: f64,
    /// `‖M_ψ(Λ(g0)k) − π(g0) M_ψ(k)‖ / ‖M_ψ(k)‖`.
    pub contravariant: f64,
}

/// Seeded intertwining check for a Gaussian kernel on `G`; the `G`-grid is
/// the `X`-grid times a centre axis.
pub fn intertwining_residuals(
    rep: &SchrodingerRep,
    x_grid: &BoxGrid,
    center: Axis,
    pairs: usize,
    seed: u64,
) -> Result<IntertwiningResiduals, String> {
    let group = NilpotentGroup::heisenberg();
    let phi = StateVector::gaussian(*rep.grid());
    let axes = x_grid.axes();
    let g_grid = BoxGrid::new(vec![axes[0], axes[1], center]).map_err(|e| e.to_string())?;
    let k = |p: &[f64]| Complex64::new((-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0).exp(), 0.0);
    let base = contravariant_transform_on_g(rep, &KernelOnG::from_fn(g_grid.clone(), k), &phi)
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = |scale: f64| {
        GroupPoint::new((0..3).map(|_| rng.random_range(-scale..scale)).collect()).expect("finite")
    };
    let mut out = IntertwiningResiduals {
        covariant_left: 0.0,
        covariant_right: 0.0,
        contravariant: 0.0,
    };
    for i in 0..pairs {
        let g0 = point(1.0);
        let g = point(1.5);
        let g0_inv = group.inverse(&g0);
        let v = StateVector::hermite(*rep.grid(), i % 4);
        let e = |x: relconv::repkit::RepError| x.to_string();

        let moved_v = rep.apply(&g0, &v).map_err(e)?.state;
        let lhs = wavelet_transform(rep, &moved_v, &phi, &g).map_err(e)?;
        let rhs = wavelet_transform(rep, &v, &phi, &group.multiply(&g0_inv, &g).map_err(|x| x.to_string())?)
            .map_err(e)?;
        out.covariant_left = out.covariant_left.max((lhs - rhs).norm());

        let moved_phi = rep.apply(&g0, &phi).map_err(e)?.state;
        let lhs = wavelet_transform(rep, &v, &phi, &group.multiply(&g, &g0).map_err(|x| x.to_string())?)
            .map_err(e)?;
        let rhs = wavelet_transform(rep, &v, &moved_phi, &g).map_err(e)?;
        out.covariant_right = out.covariant_right.max((lhs - rhs).norm());

        let shifted = KernelOnG::from_fn(g_grid.clone(), |p| {
            let g = GroupPoint::new(p.to_vec()).expect("grid point");
            k(group.multiply(&g0_inv, &g).expect("same dim").coords())
        });
        let lhs = contravariant_transform_on_g(rep, &shifted, &phi).map_err(e)?;
        let rhs = rep.apply(&g0, &base).map_err(e)?.state;
        out.contravariant = out
            .contravariant
            .max(lhs.distance(&rhs).map_err(e)? / base.norm());
    }
    Ok(out)
}

fn run_intertwine(cfg: &ScenarioConfig, setup: &Setup, report: &mut RunReport) {
    let suite = Suite::Intertwine;
    let h = cfg.params.center_half_width;
    let center = match Axis::new(-h, h, cfg.params.center_points) {
        Ok(a) => a,
        Err(e) => {
            report.records.push(Record::error(suite, "centre axis", e.to_string()));
            return;
        }
    };
    let pairs = cfg.params.intertwine_pairs;
    match intertwining_residuals(&setup.rep, &setup.x_grid, center, pairs, cfg.seed) {
        Ok(r) => {
            let tol = cfg.tolerances.intertwining;
            report.records.push(Record::residual(
                suite,
                format!("W(pi(g0)v)(g) = Wv(g0^-1 g), {pairs} pairs"),
                r.covariant_left,
                tol,
            ));
            report.records.push(Record::residual(
                suite,
                format!("R(g0)W_phi = W_(pi(g0)phi), {pairs} pairs"),
                r.covariant_right,
                tol,
            ));
            report.records.push(Record::residual(
                suite,
                format!("M(Lambda(g0)k) = pi(g0)M(k), {pairs} pairs"),
                r.contravariant,
                tol,
            ));
        }
        Err(e) => report.records.push(Record::error(suite, "intertwining", e)),
    }
}

pub fn kernel_label(family: &KernelFamily) -> String {
    match family {
        KernelFamily::Gaussian { width, amplitude } => format!("gaussian(width={width};amplitude={amplitude})"),
        KernelFamily::BandLimitedRandom { seed, .. } => format!("band-limited-random(seed={seed})"),
        KernelFamily::Delta => "delta".to_string(),
    }
}

fn verdict_for(
    setup: &Setup,
    family: &KernelFamily,
    kind: BoundKind,
    refine: bool,
) -> Result<BoundVerdict, String> {
    let rep = &setup.rep;
    let chi = rep.covariant_character();
    if refine {
        let kernel = |g: &BoxGrid| family.sample(g);
        let wavelet = |g: &RepGrid| Ok(StateVector::gaussian(*g));
        Refinement {
            kernel: &kernel,
            wavelet: &wavelet,
        }
        .verify(kind, rep, rep.chart(), &chi, &setup.x_grid)
        .map_err(|e| e.to_string())
    } else {
        let f = family.sample(&setup.x_grid).map_err(|e| e.to_string())?;
        match kind {
            BoundKind::Lemma => verify_lemma_bound(rep, rep.chart(), &chi, &f, &setup.phi),
            BoundKind::Proposition => verify_prop_bound(rep, rep.chart(), &chi, &f, &setup.phi),
        }
        .map_err(|e| e.to_string())
    }
}

fn push_bound(cfg: &ScenarioConfig, suite: Suite, label: String, result: Result<BoundVerdict, String>, report: &mut RunReport) {
    match result {
        Ok(verdict) => {
            report.records.push(Record::bound(suite, label.clone(), &verdict));
            report.csv_rows.push(CsvRow {
                scenario: format!("{}/{}/{}", cfg.name, suite, label),
                lambda: cfg.rep.lambda,
                grid: cfg.grid_label(),
                verdict,
            });
        }
        Err(e) => report.records.push(Record::error(suite, label, e)),
    }
}

fn run_single_bound(cfg: &ScenarioConfig, setup: &Setup, kind: BoundKind, refine: bool, report: &mut RunReport) {
    let suite = match kind {
        BoundKind::Lemma => Suite::LemmaBound,
        BoundKind::Proposition => Suite::PropBound,
    };
    let family = cfg.kernel.family(cfg.seed);
    let result = verdict_for(setup, &family, kind, refine);
    push_bound(cfg, suite, kernel_label(&family), result, report);
}

fn run_sweep(cfg: &ScenarioConfig, setup: &Setup, family_size: usize, report: &mut RunReport) {
    if !cfg.kernel.is_parameterized() {
        report
            .records
            .push(Record::error(Suite::Sweep, "kernel family", "the delta family has no parameter to sweep"));
        return;
    }
    let results: Vec<(String, Result<BoundVerdict, String>)> = (0..family_size as u64)
        .into_par_iter()
        .map(|i| {
            let family = cfg.kernel.member(cfg.seed, i);
            (kernel_label(&family), verdict_for(setup, &family, BoundKind::Proposition, true))
        })
        .collect();
    for (label, result) in results {
        push_bound(cfg, Suite::Sweep, label, result, report);
    }
}
