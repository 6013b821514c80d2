//! Null controls from the finite moment problem.
//!
//! Expanding the controlled solution as `w = sum w_n(t) Phi_n` and integrating
//! by parts against `Phi_n` gives
//! `w_n'' + lambda_n w_n = -L^alpha Phi'_n(L) theta(t)`.
//! With `omega = sqrt(lambda_n)` and `q = w_n' - i omega w_n`, the final state
//! vanishes iff
//!
//! ```text
//! integral_0^T theta(t) e^{i omega t} dt = (w1n - i omega w0n) / (L^alpha Phi'_n(L))
//! ```
//!
//! together with the conjugate moment for `-omega`. Writing
//! `theta = rho(t) sum_k a_k e^{-i eta_k t}` reduces this to `G a = m` with the
//! `rho`-weighted Gram matrix; the result has the least `integral theta^2 / rho`
//! among all controls with these moments (plain least L2 norm for `rho = 1`).

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exponential::{gram_matrix, signed_family, TimeWeight};
use crate::fd::{simulate_controlled, ControlSignal, FdConfig};
use crate::grid::GridFunction;
use crate::linalg::{cholesky_solve, conjugate_gradient, hermitian_eigenvalues, CMatrix};
use crate::modal::ModalState;
use crate::spectral::SpectralBasis;

/// Largest `2N` solved by dense Cholesky; bigger systems use conjugate gradients.
pub const DIRECT_SOLVE_LIMIT: usize = 200;

#[derive(Debug, Clone)]
pub struct MomentSystem {
    /// `(+omega_1..+omega_N, -omega_1..-omega_N)`.
    pub exponents: Vec<f64>,
    pub gram: CMatrix,
    pub rhs: Vec<Complex64>,
    /// `L^alpha Phi'_n(L)`.
    pub flux_weights: Vec<f64>,
    pub horizon: f64,
    pub weight: TimeWeight,
}

/// Moment system for modal data `(w0n, w1n)`, `n = 1..N`.
pub fn build_moment_system(
    w0n: &[f64],
    w1n: &[f64],
    basis: &SpectralBasis,
    horizon: f64,
    weight: &TimeWeight,
) -> Result<MomentSystem> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(domain("build_moment_system", format!("T must be > 0, got {horizon}")));
    }
    if w0n.len() != w1n.len() || w0n.is_empty() || w0n.len() > basis.mode_count() {
        return Err(domain(
            "build_moment_system",
            format!("mode counts {} / {} do not fit a {}-mode basis", w0n.len(), w1n.len(), basis.mode_count()),
        ));
    }
    let n = w0n.len();
    let omegas = &basis.frequencies()[..n];
    let scale = basis.length().powf(basis.alpha());
    let flux_weights: Vec<f64> = basis.boundary_fluxes()[..n].iter().map(|f| scale * f).collect();
    let plus: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(w1n[k], -omegas[k] * w0n[k]) / flux_weights[k])
        .collect();
    let rhs = plus.iter().copied().chain(plus.iter().map(|z| z.conj())).collect();
    let exponents = signed_family(omegas);
    let gram = gram_matrix(&exponents, horizon, weight)?;
    Ok(MomentSystem {
        exponents,
        gram,
        rhs,
        flux_weights,
        horizon,
        weight: weight.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct MinNormSolution {
    pub coeffs: Vec<Complex64>,
    /// `||G a - m|| / ||m||` (0 for `m = 0`).
    pub relative_residual: f64,
    pub lambda_min: f64,
    /// `true` when the Tikhonov fallback was used.
    pub regularized: bool,
}

/// Solves `G a = m`, falling back to `(G + mu I) a = m` with `mu = 1e-12 T`
/// when `lambda_min(G) <= 1e-12 T`.
pub fn solve_min_norm(system: &MomentSystem) -> Result<MinNormSolution> {
    let k = system.rhs.len();
    let m_norm = norm(&system.rhs);
    let lambda_min = hermitian_eigenvalues(&system.gram, 1e-14)[0];
    if m_norm == 0.0 {
        return Ok(MinNormSolution {
            coeffs: vec![Complex64::new(0.0, 0.0); k],
            relative_residual: 0.0,
            lambda_min,
            regularized: false,
        });
    }
    let floor = 1e-12 * system.horizon;
    let regularized = lambda_min <= floor;
    let mut matrix = system.gram.clone();
    if regularized {
        matrix.add_diagonal(floor);
    }
    let coeffs = if k <= DIRECT_SOLVE_LIMIT {
        match cholesky_solve(&matrix, &system.rhs) {
            Some(x) => x,
            None => conjugate_gradient(&matrix, &system.rhs, 1e-14, 20 * k).0,
        }
    } else {
        conjugate_gradient(&matrix, &system.rhs, 1e-14, 20 * k).0
    };
    let relative_residual = moment_residual(system, &coeffs);
    Ok(MinNormSolution {
        coeffs,
        relative_residual,
        lambda_min,
        regularized,
    })
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||G a - m|| / ||m||`: since `G` holds the exact moment integrals this is
/// the relative error of `integral theta e^{i eta_k t} dt` against `m_k`.
pub fn moment_residual(system: &MomentSystem, coeffs: &[Complex64]) -> f64 {
    let m_norm = norm(&system.rhs);
    let ga = system.gram.mul_vec(coeffs);
    let r: Vec<Complex64> = ga.iter().zip(&system.rhs).map(|(a, b)| a - b).collect();
    if m_norm == 0.0 {
        norm(&r)
    } else {
        norm(&r) / m_norm
    }
}

/// `theta(t) = rho(t) sum_k a_k e^{-i eta_k t}` (complex; real for conjugate-symmetric `a`).
pub fn control_value(system: &MomentSystem, coeffs: &[Complex64], t: f64) -> Complex64 {
    let rho = system.weight.value(t, system.horizon);
    let sum: Complex64 = coeffs
        .iter()
        .zip(&system.exponents)
        .map(|(a, eta)| a * Complex64::from_polar(1.0, -eta * t))
        .sum();
    rho * sum
}

/// `||theta||_{L2}^2` in closed form, `a^H G_{rho^2} a`.
pub fn control_norm_sq(system: &MomentSystem, coeffs: &[Complex64]) -> Result<f64> {
    let g = if system.weight.is_uniform() {
        system.gram.clone()
    } else {
        gram_matrix(&system.exponents, system.horizon, &system.weight.squared())?
    };
    // integral |sum a_k e^{-i eta_k t}|^2 rho^2 = sum conj(a_j) a_k G_jk
    Ok(g.quadratic_form(coeffs))
}

/// Uniform samples of the real control; `sample_count >= 20 N`.
pub fn synthesize_control(system: &MomentSystem, coeffs: &[Complex64], sample_count: usize) -> Result<ControlSignal> {
    let modes = system.exponents.len() / 2;
    let required = 20 * modes;
    if sample_count < required {
        return Err(Error::Resolution {
            routine: "synthesize_control",
            required,
            available: sample_count,
        });
    }
    ControlSignal::from_fn(system.horizon, sample_count, |t| control_value(system, coeffs, t).re)
}

/// Largest `|Im theta|` on the sample grid of `signal`, relative to `max |theta|`.
pub fn imaginary_residue(system: &MomentSystem, coeffs: &[Complex64], signal: &ControlSignal) -> f64 {
    let mut peak: f64 = 0.0;
    let mut imag: f64 = 0.0;
    for &t in &signal.times {
        let z = control_value(system, coeffs, t);
        peak = peak.max(z.norm());
        imag = imag.max(z.im.abs());
    }
    if peak == 0.0 {
        0.0
    } else {
        imag / peak
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// `final / initial` in the discrete `L2 x H*` pair; 0 for zero data.
    pub ratio: f64,
}

/// Runs the controlled FD scheme and compares final and initial sizes.
pub fn verify_control(
    w0: &GridFunction,
    w1: &GridFunction,
    theta: &ControlSignal,
    cfg: &FdConfig,
) -> Result<DecayReport> {
    let run = simulate_controlled(w0, w1, theta, cfg)?;
    let nodes = cfg.nodes();
    let sample = |g: &GridFunction| -> Vec<f64> { nodes.iter().map(|&x| g.interpolate(x)).collect() };
    let initial_energy = cfg.weak_energy(&sample(w0), &sample(w1));
    let final_energy = cfg.weak_energy(&run.final_w.values, &run.final_wt.values);
    let ratio = if initial_energy == 0.0 {
        0.0
    } else {
        final_energy / initial_energy
    };
    Ok(DecayReport {
        initial_energy,
        final_energy,
        ratio,
    })
}

/// A control for modal data together with its diagnostics.
#[derive(Debug, Clone)]
pub struct ControlDesign {
    pub system: MomentSystem,
    pub solution: MinNormSolution,
    pub norm_sq: f64,
}

impl ControlDesign {
    pub fn new(state: &ModalState, horizon: f64, weight: &TimeWeight) -> Result<Self> {
        let system = build_moment_system(&state.v0, &state.v1, state.basis(), horizon, weight)?;
        let solution = solve_min_norm(&system)?;
        let norm_sq = control_norm_sq(&system, &solution.coeffs)?;
        Ok(Self {
            system,
            solution,
            norm_sq,
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.max(0.0).sqrt()
    }

    pub fn value(&self, t: f64) -> f64 {
        control_value(&self.system, &self.solution.coeffs, t).re
    }

    /// Samples exactly at the step times of `cfg`.
    pub fn signal_for(&self, cfg: &FdConfig) -> Result<ControlSignal> {
        let count = cfg.steps() + 1;
        synthesize_control(&self.system, &self.solution.coeffs, count.max(20 * self.system.exponents.len() / 2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlReport {
    pub alpha: f64,
    #[serde(rename = "length_L")]
    pub length: f64,
    #[serde(rename = "horizon_T")]
    pub horizon: f64,
    #[serde(rename = "T_alpha")]
    pub t_alpha: f64,
    #[serde(rename = "mode_count_N")]
    pub modes: usize,
    pub weight: String,
    pub moment_residual: f64,
    pub gram_min_eigenvalue: f64,
    pub regularized: bool,
    pub theta_l2_norm: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub energy_ratio: f64,
    pub below_threshold: bool,
}

/// Synthesizes, samples and FD-verifies the control for `state`.
pub fn control_pipeline(
    state: &ModalState,
    horizon: f64,
    weight: &TimeWeight,
    cfg: &FdConfig,
) -> Result<(ControlDesign, ControlSignal, ControlReport)> {
    let basis: &Arc<SpectralBasis> = state.basis();
    let design = ControlDesign::new(state, horizon, weight)?;
    let signal = design.signal_for(cfg)?;
    let nodes = cfg.nodes();
    let w0 = basis.synthesize(&state.v0, &nodes)?;
    let w1 = basis.synthesize(&state.v1, &nodes)?;
    let decay = verify_control(&w0, &w1, &signal, cfg)?;
    let t_alpha = crate::observability::controllability_time(basis.alpha(), basis.length())?;
    let report = ControlReport {
        alpha: basis.alpha(),
        length: basis.length(),
        horizon,
        t_alpha,
        modes: state.modes(),
        weight: if weight.is_uniform() { "uniform".into() } else { "sin4".into() },
        moment_residual: design.solution.relative_residual,
        gram_min_eigenvalue: design.solution.lambda_min,
        regularized: design.solution.regularized,
        theta_l2_norm: design.norm(),
        initial_energy: decay.initial_energy,
        final_energy: decay.final_energy,
        energy_ratio: decay.ratio,
        below_threshold: horizon <= t_alpha,
    };
    Ok((design, signal, report))
}
