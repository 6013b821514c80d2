//! Subcommands. Each returns its artifacts in memory; writing them is left to
//! the caller so runs can be compared byte for byte.

use std::sync::Arc;

use anyhow::{Context, Result};
use degenwave::control::control_pipeline;
use degenwave::export::{fmt_f64, to_sorted_json, CsvTable};
use degenwave::fd::{FdConfig, Simulation};
use degenwave::liouville::{potential, translated_bump_quotient, quotient_csv, QuotientSetup};
use degenwave::modal::{time_grid, ModalState};
use degenwave::observability::{
    controllability_time, counting_density_formula, observability_report, sweep_csv, sweep_point,
};
use degenwave::sampling::rng_from_seed;
use degenwave::spectral::{build_basis, SpectralBasis};
use degenwave::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{DataKind, Scenario};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn csv(name: &str, table: &CsvTable) -> Self {
        Self {
            name: name.into(),
            contents: table.to_string_lossy(),
        }
    }

    fn json(name: &str, value: serde_json::Value) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            contents: to_sorted_json(&value)?,
        })
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Modal,
    Fd,
    Both,
}

impl Engine {
    fn modal(self) -> bool {
        self != Engine::Fd
    }

    fn fd(self) -> bool {
        self != Engine::Modal
    }
}

/// `counterexample` asked for with `alpha < 2`.
#[derive(Debug)]
pub struct BoundedRegime {
    pub alpha: f64,
}

impl std::fmt::Display for BoundedRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "liouville: the half-line counterexample needs alpha >= 2, got {}; use eigen, solve, observe or control",
            self.alpha
        )
    }
}

impl std::error::Error for BoundedRegime {}

/// 2 for a wrong regime, 3 for under-resolution, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<BoundedRegime>() {
            return 2;
        }
        match cause.downcast_ref::<Error>() {
            Some(Error::UnsupportedRegime { .. }) => return 2,
            Some(Error::Resolution { .. }) => return 3,
            _ => {}
        }
    }
    1
}

fn require_bounded(s: &Scenario) -> Result<()> {
    if s.alpha >= 2.0 {
        return Err(anyhow::Error::new(Error::UnsupportedRegime { alpha: s.alpha })
            .context("run `degenwave counterexample` for the half-line picture"));
    }
    Ok(())
}

fn basis(s: &Scenario) -> Result<Arc<SpectralBasis>> {
    Ok(Arc::new(build_basis(s.alpha, s.length, s.modes)?))
}

pub fn initial_state(s: &Scenario, basis: &Arc<SpectralBasis>) -> Result<ModalState> {
    let n = s.modes;
    let a = s.amplitude;
    let state = match s.data {
        DataKind::Zero => ModalState::zero(Arc::clone(basis), n)?,
        DataKind::Smooth => {
            let v0 = (1..=n).map(|k| a / (k * k) as f64).collect();
            let v1 = (1..=n)
                .map(|k| if k % 2 == 0 { 0.5 * a } else { -0.5 * a } / (k * k) as f64)
                .collect();
            ModalState::new(Arc::clone(basis), v0, v1)?
        }
        DataKind::Mode(m) => {
            let mut v0 = vec![0.0; n];
            v0[m - 1] = a;
            ModalState::new(Arc::clone(basis), v0, vec![0.0; n])?
        }
        DataKind::Random => {
            let mut rng = rng_from_seed(s.seed);
            let r = ModalState::random_unit_energy(Arc::clone(basis), n, &mut rng)?;
            let scale = |v: Vec<f64>| v.into_iter().map(|x| a * x).collect();
            ModalState::new(Arc::clone(basis), scale(r.v0), scale(r.v1))?
        }
    };
    Ok(state)
}

fn fd_config(s: &Scenario, horizon: f64, basis: &SpectralBasis) -> Result<FdConfig> {
    let mut cfg = FdConfig::with_regularization(s.alpha, s.length, horizon, s.fd.cells, s.fd.regularization)?;
    cfg.cfl = s.fd.cfl;
    cfg.validate()?;
    let omega = basis.frequencies()[s.modes - 1];
    cfg.check_resolution(omega)
        .with_context(|| format!("fd.cells_M = {} cannot resolve mode {}", s.fd.cells, s.modes))?;
    Ok(cfg)
}

pub fn eigen(s: &Scenario) -> Result<Outcome> {
    require_bounded(s)?;
    let b = basis(s)?;
    Ok(Outcome {
        artifacts: vec![Artifact::csv("eigen.csv", &b.to_csv())],
        summary: vec![format!(
            "eigen: alpha = {}, L = {}, mu = {}, {} modes, lambda_1 = {}",
            s.alpha,
            s.length,
            b.params().mu,
            b.mode_count(),
            fmt_f64(b.eigenvalues()[0])
        )],
        warnings: vec![],
    })
}

pub fn solve(s: &Scenario, engine: Engine) -> Result<Outcome> {
    require_bounded(s)?;
    let b = basis(s)?;
    let horizon = s.horizon()?;
    let state = initial_state(s, &b)?;
    let cfg = fd_config(s, horizon, &b)?;
    let nodes = cfg.nodes();
    let mut out = Outcome::default();
    let mut report = json!({
        "alpha": s.alpha,
        "length_L": s.length,
        "horizon_T": horizon,
        "mode_count_N": s.modes,
        "cells_M": cfg.cells,
        "epsilon": cfg.epsilon,
    });
    let times = time_grid(horizon, s.snapshots + 1);
    let mut modal_final = None;
    if engine.modal() {
        let trace = state.energy_trace(&times);
        report["modal_energy_drift"] = json!(trace.relative_drift());
        out.artifacts.push(Artifact::csv("modal_energy.csv", &trace.to_csv()));
        let mut traj = CsvTable::new(&["t", "x", "w"]);
        for &t in &times {
            let w = state.displacement(t, &nodes)?;
            for (x, v) in nodes.iter().zip(&w.values) {
                traj.push_floats(&[t, *x, *v]);
            }
        }
        out.artifacts.push(Artifact::csv("modal_trajectory.csv", &traj));
        out.artifacts.push(Artifact::csv("modal_trace.csv", &state.trace_csv(&times)));
        modal_final = Some(state.displacement(horizon, &nodes)?);
    }
    if engine.fd() {
        let w0 = b.synthesize(&state.v0, &nodes)?;
        let w1 = b.synthesize(&state.v1, &nodes)?;
        let stride = (cfg.steps() / s.snapshots).max(1);
        let run = Simulation::new(&cfg).snapshots(stride).run(&w0, &w1)?;
        report["fd_energy_drift"] = json!(run.energy.relative_drift());
        report["fd_steps"] = json!(cfg.steps());
        out.artifacts.push(Artifact::csv("fd_energy.csv", &run.energy.to_csv()));
        out.artifacts.push(Artifact::csv("fd_trajectory.csv", &run.snapshot_csv()));
        out.artifacts.push(Artifact::csv("fd_flux.csv", &run.flux_csv()));
        if let Some(exact) = &modal_final {
            let initial = cfg.l2_norm_sq(&w0.values);
            let rel = |w: &[f64], exact: &[f64]| {
                let diff: Vec<f64> = w.iter().zip(exact).map(|(a, b)| a - b).collect();
                let scale = cfg.l2_norm_sq(exact).max(initial);
                if scale == 0.0 {
                    0.0
                } else {
                    (cfg.l2_norm_sq(&diff) / scale).sqrt()
                }
            };
            let at_end = rel(&run.final_w.values, &exact.values);
            let mut worst = at_end;
            for (t, w) in &run.snapshots {
                worst = worst.max(rel(w, &state.displacement(*t, &nodes)?.values));
            }
            report["cross_engine_l2_diff"] = json!(at_end);
            report["cross_engine_l2_diff_max"] = json!(worst);
            out.summary.push(format!(
                "solve: relative L2 difference modal vs fd: {} at T, {} max over snapshots",
                fmt_f64(at_end),
                fmt_f64(worst)
            ));
        }
    }
    out.summary.insert(0, format!("solve: T = {}, engine = {:?}", fmt_f64(horizon), engine));
    out.artifacts.push(Artifact::json("solve.json", report)?);
    Ok(out)
}

pub fn observe(s: &Scenario) -> Result<Outcome> {
    require_bounded(s)?;
    let b = basis(s)?;
    let horizon = s.horizon()?;
    let ta = controllability_time(s.alpha, s.length)?;
    let mut rng = rng_from_seed(s.seed);
    let report = observability_report(&b, horizon, s.trials, &mut rng)?;
    let t_list: Vec<f64> = if s.t_list.is_empty() {
        (0..=10).map(|k| ta * (0.5 + 0.1 * k as f64)).collect()
    } else {
        s.t_list.clone()
    };
    let grid: Vec<(f64, usize)> = t_list.iter().flat_map(|&t| s.n_list.iter().map(move |&n| (t, n))).collect();
    let points = grid
        .par_iter()
        .map(|&(t, n)| sweep_point(s.alpha, s.length, t, n))
        .collect::<degenwave::Result<Vec<_>>>()?;
    let d = counting_density_formula(s.alpha, s.length)?;
    let mut warnings = vec![];
    if horizon <= ta {
        warnings.push(format!(
            "warning: T = {} does not exceed T_alpha = {}; observability constants degrade with N",
            fmt_f64(horizon),
            fmt_f64(ta)
        ));
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact::json("observe.json", serde_json::to_value(&report)?)?,
            Artifact::csv("sweep.csv", &sweep_csv(&points)),
        ],
        summary: vec![
            format!("observe: T_alpha = {}", fmt_f64(ta)),
            format!("observe: 2 pi D+ = {}", fmt_f64(2.0 * std::f64::consts::PI * d)),
            format!("observe: lambda_min(G) at T = {} is {}", fmt_f64(horizon), fmt_f64(report.gram_min_eigenvalue)),
        ],
        warnings,
    })
}

pub fn control(s: &Scenario) -> Result<Outcome> {
    require_bounded(s)?;
    let b = basis(s)?;
    let horizon = s.horizon()?;
    let state = initial_state(s, &b)?;
    let cfg = fd_config(s, horizon, &b)?;
    let (design, signal, report) = control_pipeline(&state, horizon, &s.weight, &cfg)?;
    let mut warnings = vec![];
    if report.below_threshold {
        warnings.push(format!(
            "warning: T = {} <= T_alpha = {}; no uniform control bound exists, ||theta|| = {}",
            fmt_f64(horizon),
            fmt_f64(report.t_alpha),
            fmt_f64(design.norm())
        ));
    }
    if report.regularized {
        warnings.push(format!(
            "warning: Gram matrix ill-conditioned (lambda_min = {}), Tikhonov-regularized solve used",
            fmt_f64(report.gram_min_eigenvalue)
        ));
    }
    Ok(Outcome {
        artifacts: vec![
            Artifact::csv("control.csv", &signal.to_csv()),
            Artifact::json("control.json", serde_json::to_value(&report)?)?,
        ],
        summary: vec![
            format!("control: ||theta||_L2 = {}", fmt_f64(report.theta_l2_norm)),
            format!("control: moment residual = {}", fmt_f64(report.moment_residual)),
            format!("control: final/initial energy = {}", fmt_f64(report.energy_ratio)),
        ],
        warnings,
    })
}

pub fn counterexample(s: &Scenario) -> Result<Outcome> {
    if s.alpha < 2.0 {
        return Err(BoundedRegime { alpha: s.alpha }.into());
    }
    let horizon = s.horizon()?;
    let c = &s.counterexample;
    let setup = QuotientSetup {
        alpha: s.alpha,
        length: s.length,
        horizon,
        radius: c.radius,
        cells_per_unit: c.cells_per_unit,
        kind: c.potential,
    };
    let rows = translated_bump_quotient(&setup, &c.shifts)?;
    let monotone = rows.windows(2).all(|w| w[1].quotient > w[0].quotient);
    let growth = rows.last().unwrap().quotient / rows[0].quotient;
    let report = json!({
        "alpha": s.alpha,
        "length_L": s.length,
        "horizon_T": horizon,
        "potential": format!("{:?}", c.potential),
        "potential_at_0": potential(s.alpha, s.length, 0.0),
        "rows": rows,
        "monotone": monotone,
        "growth_last_over_first": growth,
    });
    Ok(Outcome {
        artifacts: vec![
            Artifact::csv("quotient.csv", &quotient_csv(&rows)),
            Artifact::json("counterexample.json", report)?,
        ],
        summary: vec![format!(
            "counterexample: Q monotone = {monotone}, Q_last / Q_first = {}",
            fmt_f64(growth)
        )],
        warnings: vec![],
    })
}
