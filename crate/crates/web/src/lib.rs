//! wasm-bindgen exports used by `www/index.html`.
//!
//! Everything returns flat `Float64Array`s so the page can plot without any
//! glue beyond `wasm-bindgen`'s own.

use std::sync::Arc;

use degenwave::control::control_pipeline;
use degenwave::exponential::TimeWeight;
use degenwave::fd::FdConfig;
use degenwave::modal::ModalState;
use degenwave::observability::{controllability_time, gram_min_eigenvalue};
use degenwave::spectral::build_basis;
use wasm_bindgen::prelude::*;

fn js(e: degenwave::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = controllabilityTime)]
pub fn controllability_time_js(alpha: f64, length: f64) -> Result<f64, JsError> {
    controllability_time(alpha, length).map_err(js)
}

/// Samples the first `modes` eigenfunctions on `samples` uniform nodes.
///
/// Layout: `[x_0..x_{s-1}, phi_1(x)..., phi_2(x)..., ...]`.
#[wasm_bindgen(js_name = eigenSamples)]
pub fn eigen_samples(alpha: f64, length: f64, modes: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    let basis = build_basis(alpha, length, modes).map_err(js)?;
    let samples = samples.max(2);
    let xs: Vec<f64> = (0..samples).map(|j| length * j as f64 / (samples - 1) as f64).collect();
    let mut out = xs.clone();
    for n in 1..=modes {
        for &x in &xs {
            let v = if x == 0.0 { basis.eigenfunction_at_origin(n) } else { basis.eigenfunction(n, x) };
            out.push(v.map_err(js)?);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn eigenvalues(alpha: f64, length: f64, modes: usize) -> Result<Vec<f64>, JsError> {
    Ok(build_basis(alpha, length, modes).map_err(js)?.eigenvalues().to_vec())
}

/// Smallest Gram eigenvalue on `points` horizons in `(0, t_max]`.
///
/// Layout: `[T_0, lambda_0, T_1, lambda_1, ...]`.
#[wasm_bindgen(js_name = gramSweep)]
pub fn gram_sweep(alpha: f64, length: f64, modes: usize, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let basis = build_basis(alpha, length, modes).map_err(js)?;
    let mut out = Vec::with_capacity(2 * points);
    for k in 1..=points {
        let t = t_max * k as f64 / points as f64;
        out.push(t);
        out.push(gram_min_eigenvalue(&basis, t).map_err(js)?);
    }
    Ok(out)
}

/// Result of a control run: the sampled signal and its diagnostics.
#[wasm_bindgen]
pub struct ControlRun {
    times: Vec<f64>,
    values: Vec<f64>,
    residual: f64,
    energy_ratio: f64,
    norm: f64,
    t_alpha: f64,
}

#[wasm_bindgen]
impl ControlRun {
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn residual(&self) -> f64 {
        self.residual
    }

    #[wasm_bindgen(getter, js_name = energyRatio)]
    pub fn energy_ratio(&self) -> f64 {
        self.energy_ratio
    }

    #[wasm_bindgen(getter)]
    pub fn norm(&self) -> f64 {
        self.norm
    }

    #[wasm_bindgen(getter, js_name = tAlpha)]
    pub fn t_alpha(&self) -> f64 {
        self.t_alpha
    }
}

/// Drives the smooth reference state `v0_k = 1/k^2`, `v1_k = (-1)^k / (2 k^2)`
/// to rest at time `horizon` and checks the result with the FD solver.
#[wasm_bindgen(js_name = runControl)]
pub fn run_control(
    alpha: f64,
    length: f64,
    modes: usize,
    horizon: f64,
    cells: usize,
    uniform: bool,
) -> Result<ControlRun, JsError> {
    let basis = Arc::new(build_basis(alpha, length, modes).map_err(js)?);
    let v0 = (1..=modes).map(|k| 1.0 / (k * k) as f64).collect();
    let v1 = (1..=modes)
        .map(|k| if k % 2 == 0 { 0.5 } else { -0.5 } / (k * k) as f64)
        .collect();
    let state = ModalState::new(basis, v0, v1).map_err(js)?;
    let weight = if uniform { TimeWeight::uniform() } else { TimeWeight::sin_fourth() };
    let cfg = FdConfig::new(alpha, length, horizon, cells).map_err(js)?;
    let (_, signal, report) = control_pipeline(&state, horizon, &weight, &cfg).map_err(js)?;
    Ok(ControlRun {
        times: signal.times,
        values: signal.theta,
        residual: report.moment_residual,
        energy_ratio: report.energy_ratio,
        norm: report.theta_l2_norm,
        t_alpha: report.t_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_layout() {
        let v = eigen_samples(0.0, 1.0, 3, 11).unwrap();
        assert_eq!(v.len(), 44);
        assert_eq!(v[10], 1.0);
        // Dirichlet at both ends when alpha = 0
        assert!(v[11].abs() < 1e-12);
    }

    #[test]
    fn sweep_grows_past_threshold() {
        let t = controllability_time_js(0.5, 1.0).unwrap();
        let v = gram_sweep(0.5, 1.0, 8, 2.0 * t, 8).unwrap();
        assert!(v[15] > v[1]);
    }

    #[test]
    fn control_reaches_rest() {
        let t = controllability_time_js(0.5, 1.0).unwrap();
        let run = run_control(0.5, 1.0, 6, 1.3 * t, 400, false).unwrap();
        assert!(run.residual < 1e-8);
        assert!(run.energy_ratio < 1e-2);
        assert_eq!(run.times.len(), run.values.len());
    }
}
