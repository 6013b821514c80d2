//! Leapfrog finite differences for `w_tt - (a w_x)_x = f` with `a = x^alpha + epsilon`.
//!
//! Nodes `x_j = j dx`, `j = 0..=M`. The operator is in flux form with one
//! coefficient per cell face. At `x = 0` the unknown is pinned to zero
//! for `alpha < 1`; for `alpha >= 1` node 0 carries a half cell and the left
//! face flux vanishes, which is the discrete `(x^alpha w_x)(0) = 0`. At `x = L`
//! the value is prescribed (zero, or a boundary control).
//!
//! With mass weights `m_j` (`dx`, or `dx / 2` on the half cell) the scheme
//! conserves exactly the staggered energy
//! `E^{n+1/2} = 1/2 sum m_j ((w^{n+1}_j - w^n_j) / dt)^2
//!            + 1/2 sum a_{j+1/2} (w^{n+1}_{j+1} - w^{n+1}_j)(w^n_{j+1} - w^n_j) / dx`.

use crate::error::{Error, Result};
use crate::export::{fmt_f64, CsvTable};
use crate::grid::{uniform_nodes, GridFunction};
use crate::linalg::solve_tridiagonal;
use crate::modal::{EnergyTrace, ModalState};
use crate::quadrature::{gauss_legendre, trapezoid, QuadratureRule};

/// How the regularization `epsilon` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// `epsilon = dx`.
    MeshSize,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdConfig {
    pub alpha: f64,
    pub length: f64,
    pub horizon: f64,
    pub cells: usize,
    pub epsilon: f64,
    pub cfl: f64,
}

pub const DEFAULT_CFL: f64 = 0.8;

impl FdConfig {
    /// Config with `epsilon = dx` and the default CFL number; validated.
    pub fn new(alpha: f64, length: f64, horizon: f64, cells: usize) -> Result<Self> {
        Self::with_regularization(alpha, length, horizon, cells, Regularization::MeshSize)
    }

    pub fn with_regularization(
        alpha: f64,
        length: f64,
        horizon: f64,
        cells: usize,
        reg: Regularization,
    ) -> Result<Self> {
        let epsilon = match reg {
            Regularization::MeshSize => length / cells.max(1) as f64,
            Regularization::Fixed(e) => e,
        };
        let cfg = Self {
            alpha,
            length,
            horizon,
            cells,
            epsilon,
            cfl: DEFAULT_CFL,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if self.alpha >= 2.0 {
            return Err(Error::UnsupportedRegime { alpha: self.alpha });
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("L must be > 0, got {}", self.length));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("T must be > 0, got {}", self.horizon));
        }
        if self.cells < 16 {
            return bad(format!("cells_M must be >= 16, got {}", self.cells));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be >= 0, got {}", self.epsilon));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad(format!("cfl must lie in (0, 1), got {}", self.cfl));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn max_coefficient(&self) -> f64 {
        self.length.powf(self.alpha) + self.epsilon
    }

    /// Number of time steps: the smallest count whose step does not exceed
    /// `cfl dx / sqrt(max a)`, so that `T` is hit exactly.
    pub fn steps(&self) -> usize {
        let raw = self.cfl * self.dx() / self.max_coefficient().sqrt();
        (self.horizon / raw).ceil().max(1.0) as usize
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps() as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        uniform_nodes(self.length, self.cells + 1)
    }

    /// `true` for the zero-flux condition at the origin.
    pub fn flux_at_origin(&self) -> bool {
        self.alpha >= 1.0
    }

    /// Fewest cells giving 8 nodes per shortest wavelength `2 pi sqrt(a(L)) / omega`
    /// of a mode with angular frequency `omega`.
    pub fn min_cells_for_frequency(&self, omega: f64) -> usize {
        let wavelength = 2.0 * std::f64::consts::PI * self.length.powf(0.5 * self.alpha) / omega;
        (8.0 * self.length / wavelength).ceil() as usize
    }

    pub fn check_resolution(&self, omega: f64) -> Result<()> {
        let required = self.min_cells_for_frequency(omega);
        if self.cells < required {
            return Err(Error::Resolution {
                routine: "fd_solver",
                required,
                available: self.cells,
            });
        }
        Ok(())
    }

    fn lowest_unknown(&self) -> usize {
        if self.flux_at_origin() {
            0
        } else {
            1
        }
    }

    /// Face coefficients `a_{j+1/2} = q(x_{j+1/2}) dx / integral_{x_j}^{x_{j+1}} q / a dx`.
    ///
    /// The weight is `q = 1` in the Dirichlet regime and `q = x` in the flux
    /// regime, matching the leading behaviour of the flux `a w_x` near the
    /// degenerate end (constant, resp. linear). The scheme is then exact for
    /// those local profiles; away from the origin this is a second-order
    /// approximation of `a(x_{j+1/2})`.
    pub fn faces(&self) -> Vec<f64> {
        let dx = self.dx();
        let alpha = self.alpha;
        let flux = self.flux_at_origin();
        let weight = |x: f64| if flux { x } else { 1.0 };
        let (gx, gw) = gauss_legendre(8);
        let first_cell = QuadratureRule::graded(dx, 2.0 / (2.0 - alpha), 8, 8);
        (0..self.cells)
            .map(|j| {
                let left = j as f64 * dx;
                let right = left + dx;
                let resistance = if self.epsilon == 0.0 {
                    // closed form of integral q x^-alpha
                    let p = if flux { 2.0 - alpha } else { 1.0 - alpha };
                    (right.powf(p) - left.powf(p)) / p
                } else if j == 0 {
                    first_cell.integrate(|x| weight(x) / (x.powf(alpha) + self.epsilon))
                } else {
                    gx.iter()
                        .zip(&gw)
                        .map(|(u, w)| {
                            let x = left + 0.5 * dx * (u + 1.0);
                            0.5 * dx * w * weight(x) / (x.powf(alpha) + self.epsilon)
                        })
                        .sum()
                };
                weight(left + 0.5 * dx) * dx / resistance
            })
            .collect()
    }

    /// Quadrature weights of the discrete L2 inner product.
    pub fn mass_weights(&self) -> Vec<f64> {
        let dx = self.dx();
        let mut m = vec![dx; self.cells + 1];
        m[0] = 0.5 * dx;
        m[self.cells] = 0.5 * dx;
        m
    }

    /// Discrete `||w||_{L2}^2`.
    pub fn l2_norm_sq(&self, w: &[f64]) -> f64 {
        self.mass_weights().iter().zip(w).map(|(m, v)| m * v * v).sum()
    }

    /// Discrete dual norm `<f, u>` with `-(a u')' = f` under the regime boundary
    /// conditions (`u(L) = 0`).
    pub fn hstar_norm_sq(&self, f: &[f64]) -> f64 {
        let lo = self.lowest_unknown();
        let hi = self.cells; // exclusive
        let dx = self.dx();
        let a = self.faces();
        let m = self.mass_weights();
        let n = hi - lo;
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for (i, j) in (lo..hi).enumerate() {
            let right = a[j] / dx;
            let left = if j == 0 { 0.0 } else { a[j - 1] / dx };
            diag[i] = left + right;
            if i > 0 {
                sub[i] = -left;
            }
            if i + 1 < n {
                sup[i] = -right;
            }
            rhs[i] = m[j] * f[j];
        }
        let u = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        u.iter().zip(&rhs).map(|(u, r)| u * r).sum()
    }

    /// `||w||_{L2}^2 + ||w_t||_{H*}^2`.
    pub fn weak_energy(&self, w: &[f64], wt: &[f64]) -> f64 {
        self.l2_norm_sq(w) + self.hstar_norm_sq(wt)
    }
}

/// Boundary control `theta(t)` sampled on a uniform grid of `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
}

impl ControlSignal {
    pub fn new(times: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if times.len() != theta.len() || times.len() < 2 {
            return Err(Error::Config("control needs matching times and values, at least two".into()));
        }
        if theta.iter().chain(&times).any(|v| !v.is_finite()) {
            return Err(Error::Config("control samples must be finite".into()));
        }
        let h = times[1] - times[0];
        if times[0] != 0.0 || h <= 0.0 || times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
            return Err(Error::Config("control times must be uniform starting at 0".into()));
        }
        Ok(Self { times, theta })
    }

    pub fn from_fn(horizon: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let times = uniform_nodes(horizon, count.max(2));
        let theta = times.iter().map(|&t| f(t)).collect();
        Self::new(times, theta)
    }

    pub fn zero(horizon: f64, count: usize) -> Result<Self> {
        Self::from_fn(horizon, count, |_| 0.0)
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Linear interpolation, clamped to the sampled window.
    pub fn value_at(&self, t: f64) -> f64 {
        let h = self.times[1] - self.times[0];
        let last = self.times.len() - 1;
        let s = (t / h).clamp(0.0, last as f64);
        let k = (s.floor() as usize).min(last - 1);
        let w = s - k as f64;
        if w == 0.0 {
            return self.theta[k];
        }
        (1.0 - w) * self.theta[k] + w * self.theta[k + 1]
    }

    /// Trapezoid `integral theta^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.theta.iter().map(|v| v * v).collect();
        trapezoid(&self.times, &sq)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "theta"]);
        for (time, v) in self.times.iter().zip(&self.theta) {
            t.push_floats(&[*time, *v]);
        }
        t
    }
}

/// One run of the scheme.
#[derive(Debug, Clone)]
pub struct FdRun {
    pub config: FdConfig,
    /// Step times `t_n = n dt`, `n = 0..=steps`.
    pub times: Vec<f64>,
    /// `w_x(L, t_n)` from the one-sided second-order difference.
    pub boundary_flux: Vec<f64>,
    /// Staggered energy at `t_{n+1/2}`.
    pub energy: EnergyTrace,
    pub final_w: GridFunction,
    pub final_wt: GridFunction,
    /// `(t, w)` every `stride` steps when requested.
    pub snapshots: Vec<(f64, Vec<f64>)>,
}

impl FdRun {
    /// Trapezoid `integral_0^T w_x(L, t)^2 dt`.
    pub fn boundary_flux_l2_sq(&self) -> f64 {
        let sq: Vec<f64> = self.boundary_flux.iter().map(|v| v * v).collect();
        trapezoid(&self.times, &sq)
    }

    /// Table `(t, x, w)` of all snapshots.
    pub fn snapshot_csv(&self) -> CsvTable {
        let x = self.config.nodes();
        let mut t = CsvTable::new(&["t", "x", "w"]);
        for (time, w) in &self.snapshots {
            for (x, v) in x.iter().zip(w) {
                t.push_floats(&[*time, *x, *v]);
            }
        }
        t
    }

    pub fn flux_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "w_x_at_L"]);
        for (time, v) in self.times.iter().zip(&self.boundary_flux) {
            t.push_floats(&[*time, *v]);
        }
        t
    }
}

type Forcing<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

/// Builder for a simulation with optional forcing, control and snapshots.
pub struct Simulation<'a> {
    cfg: FdConfig,
    forcing: Option<Forcing<'a>>,
    control: Option<&'a ControlSignal>,
    stride: Option<usize>,
}

impl<'a> Simulation<'a> {
    pub fn new(cfg: &FdConfig) -> Self {
        Self {
            cfg: cfg.clone(),
            forcing: None,
            control: None,
            stride: None,
        }
    }

    /// Source term `f(x, t)`.
    pub fn forcing(mut self, f: Forcing<'a>) -> Self {
        self.forcing = Some(f);
        self
    }

    /// Dirichlet data `w(L, t) = theta(t)`.
    pub fn control(mut self, theta: &'a ControlSignal) -> Self {
        self.control = Some(theta);
        self
    }

    /// Record `w` every `stride` steps (and at the final step).
    pub fn snapshots(mut self, stride: usize) -> Self {
        self.stride = Some(stride.max(1));
        self
    }

    pub fn run(&self, w0: &GridFunction, w1: &GridFunction) -> Result<FdRun> {
        let cfg = &self.cfg;
        cfg.validate()?;
        let m = cfg.cells;
        let dx = cfg.dx();
        let dt = cfg.dt();
        let steps = cfg.steps();
        let nodes = cfg.nodes();
        let faces = cfg.faces();
        let mass = cfg.mass_weights();
        let lo = cfg.lowest_unknown();
        let boundary = |t: f64| self.control.map_or(0.0, |c| c.value_at(t));
        let source = |w: &mut [f64], t: f64| {
            if let Some(f) = self.forcing {
                for j in lo..m {
                    w[j] = f(nodes[j], t);
                }
            }
        };

        let mut curr = sample_on(w0, &nodes);
        let v1 = sample_on(w1, &nodes);
        curr[m] = boundary(0.0);
        if lo == 1 {
            curr[0] = 0.0;
        }

        let inv_dx2 = 1.0 / (dx * dx);
        let apply = |w: &[f64], out: &mut [f64]| {
            if lo == 0 {
                out[0] = 2.0 * faces[0] * (w[1] - w[0]) * inv_dx2;
            }
            for j in 1..m {
                out[j] = (faces[j] * (w[j + 1] - w[j]) - faces[j - 1] * (w[j] - w[j - 1])) * inv_dx2;
            }
        };

        let mut lw = vec![0.0; m + 1];
        let mut f = vec![0.0; m + 1];
        apply(&curr, &mut lw);
        source(&mut f, 0.0);
        let mut next = curr.clone();
        for j in lo..m {
            next[j] = curr[j] + dt * v1[j] + 0.5 * dt * dt * (lw[j] + f[j]);
        }
        next[m] = boundary(dt);

        let flux_at = |w: &[f64]| (3.0 * w[m] - 4.0 * w[m - 1] + w[m - 2]) / (2.0 * dx);
        let staggered_energy = |new: &[f64], old: &[f64]| {
            let mut kin = 0.0;
            for j in 0..=m {
                let v = (new[j] - old[j]) / dt;
                kin += mass[j] * v * v;
            }
            let mut pot = 0.0;
            for j in 0..m {
                pot += faces[j] * (new[j + 1] - new[j]) * (old[j + 1] - old[j]);
            }
            0.5 * kin + 0.5 * pot / dx
        };

        let mut times = Vec::with_capacity(steps + 1);
        let mut flux = Vec::with_capacity(steps + 1);
        let mut energy = EnergyTrace::default();
        let mut snapshots = Vec::new();
        times.push(0.0);
        flux.push(flux_at(&curr));
        if self.stride.is_some() {
            snapshots.push((0.0, curr.clone()));
        }
        let mut prev = curr;
        curr = next;
        energy.times.push(0.5 * dt);
        energy.energy.push(staggered_energy(&curr, &prev));

        let mut n = 1;
        loop {
            let t = n as f64 * dt;
            times.push(t);
            flux.push(flux_at(&curr));
            if let Some(s) = self.stride {
                if n % s == 0 || n == steps {
                    snapshots.push((t, curr.clone()));
                }
            }
            apply(&curr, &mut lw);
            source(&mut f, t);
            let mut new = vec![0.0; m + 1];
            let mut finite = true;
            for j in lo..m {
                let v = 2.0 * curr[j] - prev[j] + dt * dt * (lw[j] + f[j]);
                finite &= v.is_finite();
                new[j] = v;
            }
            if !finite {
                return Err(Error::Instability { step: n + 1 });
            }
            new[m] = if n == steps {
                // one step past T, boundary extrapolated linearly
                2.0 * boundary(t) - boundary(t - dt)
            } else {
                boundary(t + dt)
            };
            if n == steps {
                let wt: Vec<f64> = new.iter().zip(&prev).map(|(a, b)| (a - b) / (2.0 * dt)).collect();
                return Ok(FdRun {
                    config: cfg.clone(),
                    times,
                    boundary_flux: flux,
                    energy,
                    final_w: GridFunction::new(nodes.clone(), curr)?,
                    final_wt: GridFunction::new(nodes, wt)?,
                    snapshots,
                });
            }
            energy.times.push((n as f64 + 0.5) * dt);
            energy.energy.push(staggered_energy(&new, &curr));
            prev = std::mem::replace(&mut curr, new);
            n += 1;
        }
    }
}

fn sample_on(g: &GridFunction, nodes: &[f64]) -> Vec<f64> {
    let aligned = g.len() == nodes.len()
        && g.x.iter().zip(nodes).all(|(a, b)| (a - b).abs() <= 1e-12 * nodes[nodes.len() - 1]);
    if aligned {
        g.values.clone()
    } else {
        nodes.iter().map(|&x| g.interpolate(x)).collect()
    }
}

/// Free (or forced) evolution with `w(L, t) = 0`.
pub fn simulate_free(
    w0: &GridFunction,
    w1: &GridFunction,
    forcing: Option<Forcing<'_>>,
    cfg: &FdConfig,
) -> Result<FdRun> {
    let mut sim = Simulation::new(cfg);
    if let Some(f) = forcing {
        sim = sim.forcing(f);
    }
    sim.run(w0, w1)
}

/// Evolution with boundary control `w(L, t) = theta(t)`.
pub fn simulate_controlled(
    w0: &GridFunction,
    w1: &GridFunction,
    theta: &ControlSignal,
    cfg: &FdConfig,
) -> Result<FdRun> {
    Simulation::new(cfg).control(theta).run(w0, w1)
}

/// Samples a modal state (displacement and velocity) on the FD nodes.
pub fn modal_to_grid(state: &ModalState, cfg: &FdConfig) -> Result<(GridFunction, GridFunction)> {
    let nodes = cfg.nodes();
    let basis = state.basis();
    Ok((basis.synthesize(&state.v0, &nodes)?, basis.synthesize(&state.v1, &nodes)?))
}

/// Relative discrete L2 distance between the FD displacement at `T` and the
/// modal evolution of the same data.
pub fn modal_discrepancy(state: &ModalState, cfg: &FdConfig) -> Result<f64> {
    let (w0, w1) = modal_to_grid(state, cfg)?;
    let run = simulate_free(&w0, &w1, None, cfg)?;
    let exact = state.displacement(cfg.horizon, &cfg.nodes())?;
    let diff: Vec<f64> = run.final_w.values.iter().zip(&exact.values).map(|(a, b)| a - b).collect();
    let scale = cfg.l2_norm_sq(&exact.values).max(cfg.l2_norm_sq(&w0.values));
    Ok((cfg.l2_norm_sq(&diff) / scale).sqrt())
}

/// Largest relative discrete L2 distance between the FD and modal
/// displacements over about `samples` equally spaced step times in `[0, T]`.
pub fn modal_discrepancy_max(state: &ModalState, cfg: &FdConfig, samples: usize) -> Result<f64> {
    let (w0, w1) = modal_to_grid(state, cfg)?;
    let stride = (cfg.steps() / samples.max(1)).max(1);
    let run = Simulation::new(cfg).snapshots(stride).run(&w0, &w1)?;
    let nodes = cfg.nodes();
    let initial = cfg.l2_norm_sq(&w0.values);
    let mut worst: f64 = 0.0;
    let last = (cfg.horizon, run.final_w.values.clone());
    for (t, w) in run.snapshots.iter().chain(std::iter::once(&last)) {
        let exact = state.displacement(*t, &nodes)?;
        let diff: Vec<f64> = w.iter().zip(&exact.values).map(|(a, b)| a - b).collect();
        let scale = initial.max(cfg.l2_norm_sq(&exact.values));
        if scale > 0.0 {
            worst = worst.max((cfg.l2_norm_sq(&diff) / scale).sqrt());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub regularization: Regularization,
    pub epsilon: f64,
    pub cells: usize,
    pub error: f64,
    /// `log(e_prev / e) / log(M / M_prev)` against the previous row with the
    /// same regularization.
    pub order: Option<f64>,
}

/// Errors against the modal oracle over a grid of regularizations and cell counts.
pub fn convergence_study(
    state: &ModalState,
    horizon: f64,
    regularizations: &[Regularization],
    cells: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let basis = state.basis();
    let mut rows = Vec::new();
    for &reg in regularizations {
        let mut previous: Option<(usize, f64)> = None;
        for &m in cells {
            let cfg = FdConfig::with_regularization(basis.alpha(), basis.length(), horizon, m, reg)?;
            let error = modal_discrepancy(state, &cfg)?;
            let order = previous.map(|(pm, pe)| (pe / error).ln() / (m as f64 / pm as f64).ln());
            rows.push(ConvergenceRow {
                regularization: reg,
                epsilon: cfg.epsilon,
                cells: m,
                error,
                order,
            });
            previous = Some((m, error));
        }
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> CsvTable {
    let mut t = CsvTable::new(&["epsilon", "cells_M", "error", "order"]);
    for r in rows {
        t.push_floats(&[r.epsilon, r.cells as f64, r.error, r.order.unwrap_or(f64::NAN)]);
    }
    t
}

/// One-line description of a config, for logs.
pub fn describe(cfg: &FdConfig) -> String {
    format!(
        "M={} dx={} dt={} steps={} epsilon={}",
        cfg.cells,
        fmt_f64(cfg.dx()),
        fmt_f64(cfg.dt()),
        cfg.steps(),
        fmt_f64(cfg.epsilon)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn zero_grid(cfg: &FdConfig) -> GridFunction {
        GridFunction::from_fn(cfg.nodes(), |_| 0.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(FdConfig::new(0.5, 1.0, 1.0, 8).is_err());
        assert!(matches!(FdConfig::new(2.0, 1.0, 1.0, 100), Err(Error::UnsupportedRegime { .. })));
        let mut c = FdConfig::new(0.5, 1.0, 1.0, 100).unwrap();
        assert_eq!(c.epsilon, 0.01);
        c.cfl = 1.2;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = FdConfig::new(0.5, 1.0, 1.0, 100).unwrap();
        assert!((c.dt() * c.steps() as f64 - 1.0).abs() < 1e-14);
        assert!(c.dt() <= c.cfl * c.dx() / c.max_coefficient().sqrt());
    }

    #[test]
    fn zero_data_stays_zero() {
        for alpha in [0.5, 1.5] {
            let cfg = FdConfig::new(alpha, 1.0, 1.0, 64).unwrap();
            let z = zero_grid(&cfg);
            let run = simulate_free(&z, &z, None, &cfg).unwrap();
            assert!(run.final_w.values.iter().all(|v| *v == 0.0));
            assert!(run.boundary_flux.iter().all(|v| *v == 0.0));
            let theta = ControlSignal::zero(1.0, 11).unwrap();
            let ctl = simulate_controlled(&z, &z, &theta, &cfg).unwrap();
            assert!(ctl.final_w.values.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn classical_standing_wave() {
        let cfg = FdConfig::with_regularization(0.0, 1.0, 2.0, 2000, Regularization::Fixed(0.0)).unwrap();
        let w0 = GridFunction::from_fn(cfg.nodes(), |x| (PI * x).sin()).unwrap();
        let w1 = zero_grid(&cfg);
        let run = Simulation::new(&cfg).snapshots(50).run(&w0, &w1).unwrap();
        let mut worst: f64 = 0.0;
        for (t, w) in &run.snapshots {
            for (x, v) in cfg.nodes().iter().zip(w) {
                worst = worst.max((v - (PI * x).sin() * (PI * t).cos()).abs());
            }
        }
        assert!(worst <= 2e-3, "max error {worst}");
        assert!(run.energy.relative_drift() < 1e-10);
    }

    #[test]
    fn zero_control_matches_free_run_bitwise() {
        let cfg = FdConfig::new(0.5, 1.0, 1.3, 200).unwrap();
        let w0 = GridFunction::from_fn(cfg.nodes(), |x| x * (1.0 - x).powi(2)).unwrap();
        let w1 = GridFunction::from_fn(cfg.nodes(), |x| (3.0 * x).sin() * (1.0 - x)).unwrap();
        let free = simulate_free(&w0, &w1, None, &cfg).unwrap();
        let theta = ControlSignal::zero(1.3, 500).unwrap();
        let ctl = simulate_controlled(&w0, &w1, &theta, &cfg).unwrap();
        assert_eq!(free.final_w, ctl.final_w);
        assert_eq!(free.final_wt, ctl.final_wt);
        assert_eq!(free.boundary_flux, ctl.boundary_flux);
    }

    #[test]
    fn symmetric_data_stays_symmetric() {
        let cfg = FdConfig::with_regularization(0.0, 1.0, 1.7, 400, Regularization::Fixed(0.0)).unwrap();
        let w0 = GridFunction::from_fn(cfg.nodes(), |x| (x * (1.0 - x)).powi(3)).unwrap();
        let run = simulate_free(&w0, &zero_grid(&cfg), None, &cfg).unwrap();
        let w = &run.final_w.values;
        for j in 0..=400 {
            assert!((w[j] - w[400 - j]).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_conserved_in_both_regimes() {
        for alpha in [0.3, 1.0, 1.6] {
            let cfg = FdConfig::new(alpha, 1.0, 4.0, 400).unwrap();
            let w0 = GridFunction::from_fn(cfg.nodes(), |x| x * (1.0 - x) * (5.0 * x).cos()).unwrap();
            let w1 = GridFunction::from_fn(cfg.nodes(), |x| (1.0 - x).powi(2)).unwrap();
            let run = simulate_free(&w0, &w1, None, &cfg).unwrap();
            assert!(run.energy.relative_drift() < 1e-10, "alpha {alpha}");
            assert!(run.energy.energy.iter().all(|e| *e > 0.0));
        }
    }

    #[test]
    fn hstar_norm_of_eigenvector_like_data() {
        // for alpha = 0, eps = 0 sin(pi x) is close to a discrete eigenvector with lambda ~ pi^2
        let cfg = FdConfig::with_regularization(0.0, 1.0, 1.0, 1000, Regularization::Fixed(0.0)).unwrap();
        let f: Vec<f64> = cfg.nodes().iter().map(|x| (PI * x).sin()).collect();
        let ratio = cfg.hstar_norm_sq(&f) / cfg.l2_norm_sq(&f);
        assert!((ratio * PI * PI - 1.0).abs() < 1e-5);
    }

    #[test]
    fn control_interpolation() {
        let c = ControlSignal::from_fn(1.0, 11, |t| 2.0 * t).unwrap();
        assert!((c.value_at(0.35) - 0.7).abs() < 1e-14);
        assert_eq!(c.value_at(1.0), 2.0);
        assert_eq!(c.value_at(2.0), 2.0);
        assert!(ControlSignal::new(vec![0.0, 1.0, 3.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn instability_reported() {
        let cfg = FdConfig::new(0.5, 1.0, 1.0, 32).unwrap();
        let z = zero_grid(&cfg);
        let blowup = |_x: f64, t: f64| if t > 0.5 { f64::NAN } else { 0.0 };
        match simulate_free(&z, &z, Some(&blowup), &cfg) {
            Err(Error::Instability { step }) => assert!(step > 1 && step <= cfg.steps()),
            other => panic!("expected instability, got {other:?}"),
        }
    }
}
