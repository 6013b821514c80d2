//! The `alpha >= 2` regime after the change of variables
//! `X = integral_x^L y^{-alpha/2} dy`, `W = x^{alpha/4} w`.
//!
//! The degenerate end `x = 0` moves to `X = +infinity` and the equation becomes
//! `psi_tt - psi_XX + M(X) psi = 0` on the half line with the control end at
//! `X = 0`. Signals take unbounded time to arrive from far away, which is what
//! the translated-bump quotient below exhibits.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::export::CsvTable;
use crate::grid::GridFunction;

fn check_alpha(routine: &'static str, alpha: f64) -> Result<()> {
    if alpha >= 2.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(domain(routine, format!("requires alpha >= 2, got {alpha}")))
    }
}

/// `X(x)`; `X(L) = 0`, strictly decreasing, unbounded as `x -> 0`.
pub fn transform_coords(alpha: f64, length: f64, x: f64) -> Result<f64> {
    check_alpha("transform_coords", alpha)?;
    if !(x > 0.0 && x <= length) {
        return Err(domain("transform_coords", format!("x = {x} not in (0, {length}]")));
    }
    if alpha == 2.0 {
        return Ok((length / x).ln());
    }
    let e = 0.5 * (2.0 - alpha);
    Ok(2.0 / (alpha - 2.0) * (x.powf(e) - length.powf(e)))
}

/// Inverse of [`transform_coords`].
pub fn inverse_coords(alpha: f64, length: f64, big_x: f64) -> Result<f64> {
    check_alpha("inverse_coords", alpha)?;
    if !(big_x >= 0.0) {
        return Err(domain("inverse_coords", format!("X = {big_x} must be >= 0")));
    }
    if alpha == 2.0 {
        return Ok(length * (-big_x).exp());
    }
    let e = 0.5 * (2.0 - alpha);
    Ok((length.powf(e) + 0.5 * (alpha - 2.0) * big_x).powf(1.0 / e))
}

/// `x^{alpha/4}`.
pub fn gauge_factor(alpha: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("gauge_factor", format!("x = {x} must be > 0")));
    }
    Ok(x.powf(0.25 * alpha))
}

/// Potential after the transform; exactly 1/4 at `alpha = 2`.
pub fn potential(alpha: f64, length: f64, big_x: f64) -> f64 {
    if alpha == 2.0 {
        return 0.25;
    }
    let d = 4.0 * length.powf(0.5 * (2.0 - alpha)) - 2.0 * (2.0 - alpha) * big_x;
    alpha * (3.0 * alpha - 4.0) / (d * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PotentialKind {
    Transformed,
    /// `M = 0`: the plain half-line wave equation, for contrast.
    Zero,
}

/// Half-line problem truncated at `x_max`, `cells` uniform cells.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineProblem {
    pub alpha: f64,
    pub length: f64,
    pub x_max: f64,
    pub cells: usize,
    pub kind: PotentialKind,
    pub cfl: f64,
}

impl HalfLineProblem {
    pub fn new(alpha: f64, length: f64, x_max: f64, cells: usize) -> Result<Self> {
        check_alpha("HalfLineProblem", alpha)?;
        if !(length > 0.0 && x_max > 0.0 && x_max.is_finite()) {
            return Err(domain("HalfLineProblem", format!("need L > 0 and Xmax > 0, got {length}, {x_max}")));
        }
        if cells < 16 {
            return Err(domain("HalfLineProblem", format!("at least 16 cells required, got {cells}")));
        }
        Ok(Self {
            alpha,
            length,
            x_max,
            cells,
            kind: PotentialKind::Transformed,
            cfl: 0.5,
        })
    }

    pub fn without_potential(mut self) -> Self {
        self.kind = PotentialKind::Zero;
        self
    }

    pub fn dx(&self) -> f64 {
        self.x_max / self.cells as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.dx();
        (0..=self.cells).map(|j| j as f64 * h).collect()
    }

    pub fn potential_at(&self, big_x: f64) -> f64 {
        match self.kind {
            PotentialKind::Transformed => potential(self.alpha, self.length, big_x),
            PotentialKind::Zero => 0.0,
        }
    }

    fn steps_for(&self, horizon: f64) -> (usize, f64) {
        let h = self.dx();
        let m_max = self.nodes().iter().map(|&x| self.potential_at(x)).fold(0.0, f64::max);
        // leapfrog bound for -D2 + M: dt^2 (4/h^2 + M) <= 4
        let dt_max = 2.0 / (4.0 / (h * h) + m_max).sqrt();
        let steps = (horizon / (self.cfl * dt_max)).ceil().max(1.0) as usize;
        (steps, horizon / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineRun {
    pub times: Vec<f64>,
    /// `psi_X(0, t)`.
    pub trace: Vec<f64>,
    /// Largest relative change of the discrete energy over the run.
    pub energy_drift: f64,
}

impl HalfLineRun {
    /// Trapezoid value of `integral_0^T psi_X(0,t)^2 dt`.
    pub fn trace_energy(&self) -> f64 {
        let sq: Vec<f64> = self.trace.iter().map(|v| v * v).collect();
        crate::quadrature::trapezoid(&self.times, &sq)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "psi_X0"]);
        for (a, b) in self.times.iter().zip(&self.trace) {
            t.push_floats(&[*a, *b]);
        }
        t
    }
}

fn on_nodes(problem: &HalfLineProblem, f: &GridFunction) -> Vec<f64> {
    let nodes = problem.nodes();
    if f.x == nodes {
        f.values.clone()
    } else {
        nodes.iter().map(|&x| f.interpolate(x)).collect()
    }
}

/// Leapfrog for `psi_tt - psi_XX + M psi = 0`, `psi(0,t) = psi(Xmax,t) = 0`.
///
/// The far boundary is harmless as long as nothing reflected from it can
/// return to `X = 0` before `T`, which requires `support_end + T <= Xmax`.
pub fn simulate_halfline(
    problem: &HalfLineProblem,
    psi0: &GridFunction,
    psi1: &GridFunction,
    horizon: f64,
) -> Result<HalfLineRun> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(domain("simulate_halfline", format!("T must be > 0, got {horizon}")));
    }
    let m = problem.cells;
    let h = problem.dx();
    let nodes = problem.nodes();
    let u0 = on_nodes(problem, psi0);
    let u1 = on_nodes(problem, psi1);
    let active = |j: usize| u0[j] != 0.0 || u1[j] != 0.0;
    if let Some(last) = (0..=m).rev().find(|&j| active(j)) {
        if active(0) {
            return Err(domain("simulate_halfline", "data must vanish at X = 0"));
        }
        let support_end = nodes[(last + 1).min(m)];
        let limit = problem.x_max - horizon;
        if support_end > limit {
            return Err(Error::TruncationContamination { support_end, limit });
        }
    }

    let pot: Vec<f64> = nodes.iter().map(|&x| problem.potential_at(x)).collect();
    let (steps, dt) = problem.steps_for(horizon);
    let ih2 = 1.0 / (h * h);
    let apply = |u: &[f64], out: &mut [f64]| {
        // out = D2 u - M u on interior nodes
        for j in 1..m {
            out[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * ih2 - pot[j] * u[j];
        }
    };
    let energy = |prev: &[f64], next: &[f64]| -> f64 {
        let mut e = 0.0;
        for j in 1..m {
            let v = (next[j] - prev[j]) / dt;
            e += v * v + pot[j] * next[j] * prev[j];
        }
        for j in 0..m {
            e += (next[j + 1] - next[j]) * (prev[j + 1] - prev[j]) * ih2;
        }
        0.5 * h * e
    };

    let mut lap = vec![0.0; m + 1];
    let mut prev = u0.clone();
    prev[0] = 0.0;
    prev[m] = 0.0;
    apply(&prev, &mut lap);
    let mut cur = vec![0.0; m + 1];
    for j in 1..m {
        cur[j] = prev[j] + dt * u1[j] + 0.5 * dt * dt * lap[j];
    }
    let trace_of = |u: &[f64]| (4.0 * u[1] - u[2]) / (2.0 * h);
    let mut times = Vec::with_capacity(steps + 1);
    let mut trace = Vec::with_capacity(steps + 1);
    times.push(0.0);
    trace.push(trace_of(&prev));
    times.push(dt);
    trace.push(trace_of(&cur));

    let e0 = energy(&prev, &cur);
    let mut drift: f64 = 0.0;
    let mut next = vec![0.0; m + 1];
    for step in 2..=steps {
        apply(&cur, &mut lap);
        for j in 1..m {
            next[j] = 2.0 * cur[j] - prev[j] + dt * dt * lap[j];
        }
        if !next[1].is_finite() {
            return Err(Error::Instability { step });
        }
        let e = energy(&cur, &next);
        if e0 > 0.0 {
            drift = drift.max((e - e0).abs() / e0);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        times.push(step as f64 * dt);
        trace.push(trace_of(&cur));
    }
    Ok(HalfLineRun {
        times,
        trace,
        energy_drift: drift,
    })
}

/// `(1 - r^2)^3` for `|r| < 1`.
pub fn bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (1.0 - r * r).powi(3)
    } else {
        0.0
    }
}

/// Derivative of [`bump`] in `r`.
pub fn bump_derivative(r: f64) -> f64 {
    if r.abs() < 1.0 {
        -6.0 * r * (1.0 - r * r).powi(2)
    } else {
        0.0
    }
}

/// Setup for the translated bump experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSetup {
    pub alpha: f64,
    pub length: f64,
    pub horizon: f64,
    /// Bump half width; must be below the smallest shift.
    pub radius: f64,
    pub cells_per_unit: usize,
    pub kind: PotentialKind,
}

impl QuotientSetup {
    pub fn new(alpha: f64, length: f64, horizon: f64) -> Self {
        Self {
            alpha,
            length,
            horizon,
            radius: 0.75,
            cells_per_unit: 200,
            kind: PotentialKind::Transformed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientRow {
    pub shift: i64,
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
}

/// `Q_n = (||psi0||_{H1}^2 + ||psi1||^2) / integral_0^T psi_X(0,t)^2 dt` for
/// `psi0 = bump((X - n)/r)` and `psi1 = psi0'`, a pulse initially moving
/// toward `X = 0`.
///
/// Shifts are whole numbers and the grid has an integer number of cells per
/// unit, so every shifted profile is the same node vector translated and the
/// numerator is identical across shifts.
pub fn translated_bump_quotient(setup: &QuotientSetup, shifts: &[i64]) -> Result<Vec<QuotientRow>> {
    if shifts.is_empty() || shifts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("translated_bump_quotient", "shifts must be a nonempty increasing list"));
    }
    if !(setup.radius > 0.0) || setup.radius >= shifts[0] as f64 {
        return Err(domain(
            "translated_bump_quotient",
            format!("bump radius {} must lie in (0, {})", setup.radius, shifts[0]),
        ));
    }
    let k = setup.cells_per_unit;
    let last = *shifts.last().unwrap() as f64;
    let units = (last + setup.radius + setup.horizon + 1.0).ceil() as usize;
    let mut problem = HalfLineProblem::new(setup.alpha, setup.length, units as f64, units * k)?;
    problem.kind = setup.kind;
    let nodes = problem.nodes();
    let h = problem.dx();
    let r = setup.radius;
    shifts
        .iter()
        .map(|&n| {
            let offset = n * k as i64;
            let local = |j: usize| (j as i64 - offset) as f64 / k as f64 / r;
            let v0: Vec<f64> = (0..nodes.len()).map(|j| bump(local(j))).collect();
            let v1: Vec<f64> = (0..nodes.len()).map(|j| bump_derivative(local(j)) / r).collect();
            let numerator = h1_norm_sq(&v0, h) + l2_sq(&v1, h);
            let psi0 = GridFunction::new(nodes.clone(), v0)?;
            let psi1 = GridFunction::new(nodes.clone(), v1)?;
            let run = simulate_halfline(&problem, &psi0, &psi1, setup.horizon)?;
            let denominator = run.trace_energy();
            Ok(QuotientRow {
                shift: n,
                numerator,
                denominator,
                quotient: numerator / denominator,
            })
        })
        .collect()
}

fn l2_sq(v: &[f64], h: f64) -> f64 {
    h * v.iter().map(|a| a * a).sum::<f64>()
}

/// `sum h (u^2 + (Du)^2)` on the uniform grid.
pub fn h1_norm_sq(v: &[f64], h: f64) -> f64 {
    let grad: f64 = v.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    l2_sq(v, h) + grad / h
}

pub fn quotient_csv(rows: &[QuotientRow]) -> CsvTable {
    let mut t = CsvTable::new(&["shift", "numerator", "denominator", "quotient"]);
    for r in rows {
        t.push_indexed(r.shift, &[r.numerator, r.denominator, r.quotient]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coordinate_examples() {
        assert_eq!(transform_coords(4.0, 1.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(transform_coords(4.0, 1.0, 0.5).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(transform_coords(2.0, 1.0, (-1.0f64).exp()).unwrap(), 1.0, max_relative = 1e-15);
        assert!(transform_coords(4.0, 1.0, 0.0).is_err());
        assert!(transform_coords(1.5, 1.0, 0.5).is_err());
        assert_eq!(gauge_factor(4.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(gauge_factor(4.0, 16.0).unwrap(), 16.0, max_relative = 1e-15);
        assert_relative_eq!(gauge_factor(2.0, 4.0).unwrap(), 2.0, max_relative = 1e-15);
        assert!(gauge_factor(2.0, -1.0).is_err());
    }

    #[test]
    fn derivative_and_inverse() {
        for alpha in [2.0, 2.5, 4.0, 7.0] {
            for x in [0.1, 0.4, 0.9] {
                let h = 1e-3 * x;
                let f = |y: f64| transform_coords(alpha, 1.3, y).unwrap();
                let d = (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
                assert_relative_eq!(d, -x.powf(-0.5 * alpha), max_relative = 1e-8);
                let big = transform_coords(alpha, 1.3, x).unwrap();
                assert_relative_eq!(inverse_coords(alpha, 1.3, big).unwrap(), x, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn potential_shape() {
        for x in [0.0, 1.0, 1e3] {
            assert_eq!(potential(2.0, 3.0, x), 0.25);
        }
        for alpha in [8.0 / 3.0, 3.0, 4.0, 6.0] {
            assert!((0..100).all(|k| potential(alpha, 1.0, k as f64 * 0.5) > 0.0));
            let limit = alpha * (3.0 * alpha - 4.0) / (4.0 * (alpha - 2.0).powi(2));
            assert_relative_eq!(potential(alpha, 1.0, 1e3) * 1e6, limit, max_relative = 1e-2);
        }
        assert_relative_eq!(potential(4.0, 1.0, 1.0), 2.0 / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_data_zero_trace() {
        let p = HalfLineProblem::new(4.0, 1.0, 10.0, 500).unwrap();
        let z = GridFunction::new(p.nodes(), vec![0.0; 501]).unwrap();
        let run = simulate_halfline(&p, &z, &z, 3.0).unwrap();
        assert!(run.trace.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn free_pulse_arrives_at_shift() {
        let p = HalfLineProblem::new(4.0, 1.0, 12.0, 2400).unwrap().without_potential();
        let nodes = p.nodes();
        let shift = 3.0;
        let r = 0.5;
        let psi0 = GridFunction::from_fn(nodes.clone(), |x| bump((x - shift) / r)).unwrap();
        let psi1 = GridFunction::from_fn(nodes, |x| bump_derivative((x - shift) / r) / r).unwrap();
        let run = simulate_halfline(&p, &psi0, &psi1, 5.0).unwrap();
        let (k, _) = run
            .trace
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        // psi = f(X + t): psi_X(0,t) = f'(t), extremal at r = -+1/sqrt(5)
        let t = run.times[k];
        assert!((t - shift).abs() < r, "peak at {t}");
        assert!(run.energy_drift < 1e-3);
    }

    #[test]
    fn truncation_detected() {
        let p = HalfLineProblem::new(4.0, 1.0, 6.0, 600).unwrap();
        let nodes = p.nodes();
        let psi0 = GridFunction::from_fn(nodes, |x| bump(x - 3.0)).unwrap();
        let zero = GridFunction::new(psi0.x.clone(), vec![0.0; psi0.len()]).unwrap();
        let e = simulate_halfline(&p, &psi0, &zero, 3.0).unwrap_err();
        assert!(matches!(e, Error::TruncationContamination { .. }));
    }

    #[test]
    fn energy_conserved_with_potential() {
        let p = HalfLineProblem::new(4.0, 1.0, 14.0, 2800).unwrap();
        let psi0 = GridFunction::from_fn(p.nodes(), |x| bump((x - 4.0) / 0.8)).unwrap();
        let zero = GridFunction::new(psi0.x.clone(), vec![0.0; psi0.len()]).unwrap();
        let run = simulate_halfline(&p, &psi0, &zero, 6.0).unwrap();
        assert!(run.energy_drift < 1e-3, "drift {}", run.energy_drift);
    }

    #[test]
    fn numerator_is_shift_invariant() {
        let mut s = QuotientSetup::new(4.0, 1.0, 1.0);
        s.cells_per_unit = 50;
        let rows = translated_bump_quotient(&s, &[1, 2, 3]).unwrap();
        assert_eq!(rows[0].numerator, rows[1].numerator);
        assert_eq!(rows[1].numerator, rows[2].numerator);
        assert!(translated_bump_quotient(&s, &[2, 1]).is_err());
    }
}
