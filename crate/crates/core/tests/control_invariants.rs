use std::sync::Arc;

use degenwave::control::*;
use degenwave::exponential::TimeWeight;
use degenwave::fd::{ControlSignal, FdConfig};
use degenwave::grid::GridFunction;
use degenwave::modal::ModalState;
use degenwave::observability::controllability_time;
use degenwave::sampling::rng_from_seed;
use degenwave::spectral::{build_basis, SpectralBasis};

fn basis(modes: usize) -> Arc<SpectralBasis> {
    Arc::new(build_basis(0.5, 1.0, modes).unwrap())
}

fn smooth(b: &Arc<SpectralBasis>, modes: usize) -> ModalState {
    let v0 = (1..=modes).map(|k| 1.0 / (k * k) as f64).collect();
    let v1 = (1..=modes)
        .map(|k| if k % 2 == 0 { 0.5 } else { -0.5 } / (k * k) as f64)
        .collect();
    ModalState::new(Arc::clone(b), v0, v1).unwrap()
}

#[test]
fn controls_are_linear_in_the_data() {
    let b = basis(16);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let mut rng = rng_from_seed(8);
    for weight in [TimeWeight::uniform(), TimeWeight::sin_fourth()] {
        let p = ModalState::random_unit_energy(Arc::clone(&b), 16, &mut rng).unwrap();
        let q = ModalState::random_unit_energy(Arc::clone(&b), 16, &mut rng).unwrap();
        let add = |a: &[f64], c: &[f64], s: f64| a.iter().zip(c).map(|(x, y)| x + s * y).collect::<Vec<_>>();
        let sum = ModalState::new(Arc::clone(&b), add(&p.v0, &q.v0, 1.0), add(&p.v1, &q.v1, 1.0)).unwrap();
        let twice = ModalState::new(Arc::clone(&b), add(&p.v0, &p.v0, 1.0), add(&p.v1, &p.v1, 1.0)).unwrap();
        let dp = ControlDesign::new(&p, t, &weight).unwrap();
        let dq = ControlDesign::new(&q, t, &weight).unwrap();
        let ds = ControlDesign::new(&sum, t, &weight).unwrap();
        let d2 = ControlDesign::new(&twice, t, &weight).unwrap();
        let scale = (0..=400).map(|k| dp.value(t * k as f64 / 400.0).abs()).fold(0.0, f64::max);
        for k in 0..=400 {
            let s = t * k as f64 / 400.0;
            assert!((ds.value(s) - dp.value(s) - dq.value(s)).abs() <= 1e-10 * scale.max(1.0));
            assert!((d2.value(s) - 2.0 * dp.value(s)).abs() <= 1e-10 * scale.max(1.0));
        }
    }
}

#[test]
fn zero_data_pipeline() {
    let b = basis(16);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let cfg = FdConfig::new(0.5, 1.0, t, 400).unwrap();
    let z = ModalState::zero(Arc::clone(&b), 16).unwrap();
    let (design, signal, report) = control_pipeline(&z, t, &TimeWeight::sin_fourth(), &cfg).unwrap();
    assert_eq!(design.norm(), 0.0);
    assert!(signal.theta.iter().all(|v| *v == 0.0));
    assert_eq!(report.energy_ratio, 0.0);
}

#[test]
fn reference_pipeline_decays() {
    // fixed smooth data, weighted minimal-norm control
    let b = basis(16);
    let s = smooth(&b, 16);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let cfg = FdConfig::new(0.5, 1.0, t, 2000).unwrap();
    let (design, signal, report) = control_pipeline(&s, t, &TimeWeight::sin_fourth(), &cfg).unwrap();
    assert!(report.moment_residual <= 1e-9, "{report:?}");
    assert!(report.energy_ratio <= 1e-3, "{report:?}");
    assert!(!report.regularized);
    assert!(imaginary_residue(&design.system, &design.solution.coeffs, &signal) <= 1e-10);
    // sampled norm agrees with the closed form
    assert!((signal.l2_norm_sq() - design.norm_sq).abs() <= 1e-6 * design.norm_sq);
}

#[test]
fn wrong_sign_is_detected() {
    // the moment sign is what makes the energy go to zero: flipping theta
    // makes the final state larger than the initial one
    let b = basis(8);
    let s = smooth(&b, 8);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let cfg = FdConfig::new(0.5, 1.0, t, 1000).unwrap();
    let design = ControlDesign::new(&s, t, &TimeWeight::sin_fourth()).unwrap();
    let good = design.signal_for(&cfg).unwrap();
    let bad = ControlSignal::new(good.times.clone(), good.theta.iter().map(|v| -v).collect()).unwrap();
    let nodes = cfg.nodes();
    let w0 = b.synthesize(&s.v0, &nodes).unwrap();
    let w1 = b.synthesize(&s.v1, &nodes).unwrap();
    let ok = verify_control(&w0, &w1, &good, &cfg).unwrap();
    let flipped = verify_control(&w0, &w1, &bad, &cfg).unwrap();
    assert!(ok.ratio < 1e-2);
    assert!(flipped.ratio > 1.0);
}

#[test]
fn refinement_lowers_the_residual_energy() {
    let b = basis(8);
    let s = smooth(&b, 8);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let design = ControlDesign::new(&s, t, &TimeWeight::sin_fourth()).unwrap();
    let ratio = |m: usize| {
        let cfg = FdConfig::new(0.5, 1.0, t, m).unwrap();
        let nodes = cfg.nodes();
        let w0: GridFunction = b.synthesize(&s.v0, &nodes).unwrap();
        let w1 = b.synthesize(&s.v1, &nodes).unwrap();
        verify_control(&w0, &w1, &design.signal_for(&cfg).unwrap(), &cfg).unwrap().ratio
    };
    let coarse = ratio(500);
    let fine = ratio(2000);
    assert!(fine < coarse, "{fine} vs {coarse}");
}

#[test]
fn norm_grows_below_threshold() {
    let b = basis(24);
    let t = 0.8 * controllability_time(0.5, 1.0).unwrap();
    let norms: Vec<f64> = [8, 16, 24]
        .iter()
        .map(|&n| ControlDesign::new(&smooth(&b, n), t, &TimeWeight::uniform()).unwrap().norm())
        .collect();
    assert!(norms[2] >= 10.0 * norms[0], "{norms:?}");
    assert!(norms[1] > norms[0] && norms[2] > norms[1]);
}

#[test]
fn single_mode_norm_nonincreasing_in_horizon() {
    let b = basis(12);
    let mut v0 = vec![0.0; 12];
    v0[2] = 1.0;
    let s = ModalState::new(Arc::clone(&b), v0, vec![0.0; 12]).unwrap();
    let ta = controllability_time(0.5, 1.0).unwrap();
    let mut prev = f64::INFINITY;
    for k in 0..12 {
        let t = ta * (0.7 + 0.1 * k as f64);
        let n = ControlDesign::new(&s, t, &TimeWeight::uniform()).unwrap().norm();
        assert!(n <= prev * (1.0 + 1e-9), "T {t}: {n} after {prev}");
        prev = n;
    }
}

#[test]
fn uniform_weight_residual_energy_is_reported() {
    // the unweighted control jumps at t = 0 against w(L, 0) = 0; the pipeline
    // still steers the energy down by about three orders of magnitude
    let b = basis(16);
    let s = smooth(&b, 16);
    let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
    let cfg = FdConfig::new(0.5, 1.0, t, 2000).unwrap();
    let (_, _, report) = control_pipeline(&s, t, &TimeWeight::uniform(), &cfg).unwrap();
    assert!(report.moment_residual <= 1e-9);
    assert!(report.energy_ratio < 1e-2);
}
