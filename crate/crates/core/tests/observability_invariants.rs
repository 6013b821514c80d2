use std::sync::Arc;

use degenwave::modal::{time_grid, ModalState};
use degenwave::observability::*;
use degenwave::sampling::rng_from_seed;
use degenwave::specfun::{bessel_zeros, BesselOrder};
use degenwave::spectral::{build_basis, BasisParams};
use std::f64::consts::PI;

#[test]
fn density_identity_on_a_grid() {
    for i in 0..40 {
        let alpha = 1.99 * i as f64 / 39.0;
        for length in [0.1, 0.5, 1.0, 2.0, 7.5] {
            let t = controllability_time(alpha, length).unwrap();
            let d = counting_density_formula(alpha, length).unwrap();
            assert!((2.0 * PI * d - t).abs() <= 1e-12 * t, "alpha {alpha} L {length}");
        }
    }
}

#[test]
fn frequency_gaps_converge() {
    for alpha in [0.0, 0.5, 1.0, 1.5] {
        for length in [0.5, 2.0] {
            let p = BasisParams::new(alpha, length).unwrap();
            let z = bessel_zeros(BesselOrder::new(p.mu).unwrap(), 201);
            let scale = p.rho / length.powf(p.rho);
            let gaps: Vec<f64> = z.windows(2).map(|w| scale * (w[1] - w[0])).collect();
            let delta = gaps.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(delta > 0.5 * PI * scale);
            let limit = PI * scale;
            assert!((gaps[199] - limit).abs() <= 1e-2 * limit);
        }
    }
}

#[test]
fn empirical_density_close_to_formula() {
    for alpha in [0.0, 0.5, 1.0, 1.5] {
        let p = BasisParams::new(alpha, 1.3).unwrap();
        let z = bessel_zeros(BesselOrder::new(p.mu).unwrap(), 500);
        let d = counting_density(&z, p.rho, 1.3).unwrap();
        let want = counting_density_formula(alpha, 1.3).unwrap();
        assert!((d - want).abs() <= 0.02 * want);
    }
}

#[test]
fn modal_energy_and_reversibility() {
    let b = Arc::new(build_basis(0.7, 1.4, 30).unwrap());
    let mut rng = rng_from_seed(3);
    for _ in 0..10 {
        let s = ModalState::random_unit_energy(Arc::clone(&b), 30, &mut rng).unwrap();
        let e0 = s.energy();
        let tr = s.energy_trace(&time_grid(25.0, 400));
        assert!(tr.energy.iter().all(|e| (e - e0).abs() <= 1e-12 * e0));
        let back = s.evolve(3.7).evolve(-3.7);
        for (a, c) in back.v0.iter().chain(&back.v1).zip(s.v0.iter().chain(&s.v1)) {
            assert!((a - c).abs() <= 1e-12);
        }
    }
}

#[test]
fn hidden_regularity_constant_is_stable() {
    for alpha in [0.0, 0.5, 1.0, 1.5] {
        let ta = controllability_time(alpha, 1.0).unwrap();
        for factor in [1.2, 2.0] {
            let b = Arc::new(build_basis(alpha, 1.0, 12).unwrap());
            let mut rng = rng_from_seed(21);
            let c = hidden_regularity_constants(&b, 12, factor * ta, 100, &mut rng).unwrap();
            let s = Stats::of(&c);
            assert!(s.spread() <= 0.5, "alpha {alpha} T {}: {s:?}", factor * ta);
        }
    }
}

#[test]
fn min_eigenvalue_nondecreasing_in_horizon() {
    let b = build_basis(1.0, 1.0, 20).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for k in 0..30 {
        let t = 1.0 + 0.2 * k as f64;
        let l = gram_min_eigenvalue(&b, t).unwrap();
        assert!(l >= prev - 1e-12 * t, "T {t}: {l} after {prev}");
        prev = l;
    }
}

#[test]
fn threshold_brackets_controllability_time() {
    for alpha in [0.5, 1.0] {
        let ta = controllability_time(alpha, 1.0).unwrap();
        let t = bracket_threshold_time(alpha, 1.0, 10, 40, 0.25, (0.6 * ta, 1.4 * ta), 12).unwrap();
        assert!((t - ta).abs() <= 0.1 * ta, "alpha {alpha}: {t} vs {ta}");
    }
}

#[test]
fn ingham_draws_inside_gram_bounds() {
    let b = build_basis(0.5, 1.0, 10).unwrap();
    let ta = controllability_time(0.5, 1.0).unwrap();
    let mut rng = rng_from_seed(5);
    let c = ingham_two_sided_check(&b, 1.5 * ta, 200, &mut rng).unwrap();
    assert!(c.lambda_min > 0.0);
    assert!(c.lambda_min <= c.c_low + 1e-12 && c.c_high <= c.lambda_max + 1e-12);
}
