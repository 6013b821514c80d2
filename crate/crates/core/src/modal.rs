//! Free evolution in eigen-coordinates.
//!
//! A state `(v0, v1)` stands for `v(x, 0) = sum v0[n] Phi_n(x)`,
//! `v_t(x, 0) = sum v1[n] Phi_n(x)`; each mode rotates with frequency
//! `omega_n = sqrt(lambda_n)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::exponential::{gram_matrix, signed_family, TimeWeight};
use crate::export::CsvTable;
use crate::sampling::unit_sphere;
use crate::spectral::SpectralBasis;

#[derive(Debug, Clone)]
pub struct ModalState {
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
    basis: Arc<SpectralBasis>,
}

/// `c_plus[n] = (v0 + v1 / (i omega)) / 2` and `c_minus[n] = (v0 - v1 / (i omega)) / 2`,
/// so `v_n(t) = c_plus e^{i omega t} + c_minus e^{-i omega t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexModeAmps {
    pub c_plus: Vec<Complex64>,
    pub c_minus: Vec<Complex64>,
}

/// Energy samples `E(t_k)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
}

impl EnergyTrace {
    /// `max_k |E_k - E_0| / E_0`, or 0 for a zero trace.
    pub fn relative_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else {
            return 0.0;
        };
        if e0 == 0.0 {
            return self.energy.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        }
        self.energy.iter().fold(0.0f64, |m, e| m.max((e - e0).abs() / e0))
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "E"]);
        for (time, e) in self.times.iter().zip(&self.energy) {
            t.push_floats(&[*time, *e]);
        }
        t
    }
}

impl ModalState {
    pub fn new(basis: Arc<SpectralBasis>, v0: Vec<f64>, v1: Vec<f64>) -> Result<Self> {
        if v0.len() != v1.len() {
            return Err(domain(
                "ModalState",
                format!("v0 has {} modes, v1 has {}", v0.len(), v1.len()),
            ));
        }
        if v0.len() > basis.mode_count() {
            return Err(domain(
                "ModalState",
                format!("{} modes exceed the basis size {}", v0.len(), basis.mode_count()),
            ));
        }
        if v0.iter().chain(&v1).any(|v| !v.is_finite()) {
            return Err(domain("ModalState", "coefficients must be finite"));
        }
        Ok(Self { v0, v1, basis })
    }

    pub fn zero(basis: Arc<SpectralBasis>, modes: usize) -> Result<Self> {
        Self::new(basis, vec![0.0; modes], vec![0.0; modes])
    }

    /// Random state with `E = 1/2`: `(sqrt(lambda_n) v0[n], v1[n])` is uniform on
    /// the unit sphere of `R^{2 modes}`.
    pub fn random_unit_energy(
        basis: Arc<SpectralBasis>,
        modes: usize,
        rng: &mut impl rand::Rng,
    ) -> Result<Self> {
        if modes == 0 || modes > basis.mode_count() {
            return Err(domain("ModalState", format!("cannot draw {modes} modes")));
        }
        let p = unit_sphere(2 * modes, rng);
        let w = basis.frequencies();
        let v0 = (0..modes).map(|n| p[n] / w[n]).collect();
        let v1 = p[modes..].to_vec();
        Self::new(basis, v0, v1)
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn modes(&self) -> usize {
        self.v0.len()
    }

    fn omegas(&self) -> Vec<f64> {
        self.basis.eigenvalues()[..self.modes()].iter().map(|l| l.sqrt()).collect()
    }

    pub fn to_amplitudes(&self) -> ComplexModeAmps {
        let mut c_plus = Vec::with_capacity(self.modes());
        let mut c_minus = Vec::with_capacity(self.modes());
        for ((a, b), w) in self.v0.iter().zip(&self.v1).zip(self.omegas()) {
            // v1 / (i omega) = -i v1 / omega
            let q = Complex64::new(0.0, -b / w);
            c_plus.push(0.5 * (a + q));
            c_minus.push(0.5 * (a - q));
        }
        ComplexModeAmps { c_plus, c_minus }
    }

    /// Inverse of [`Self::to_amplitudes`]; imaginary residue of non-conjugate
    /// input is discarded.
    pub fn from_amplitudes(basis: Arc<SpectralBasis>, amps: &ComplexModeAmps) -> Result<Self> {
        let w = basis.frequencies();
        if amps.c_plus.len() != amps.c_minus.len() || amps.c_plus.len() > w.len() {
            return Err(domain("ModalState", "amplitude lists do not fit the basis"));
        }
        let v0 = amps.c_plus.iter().zip(&amps.c_minus).map(|(p, m)| (p + m).re).collect();
        let v1 = amps
            .c_plus
            .iter()
            .zip(&amps.c_minus)
            .zip(&w)
            .map(|((p, m), w)| (Complex64::new(0.0, *w) * (p - m)).re)
            .collect();
        Self::new(basis, v0, v1)
    }

    /// State at time `t` (any sign).
    pub fn evolve(&self, t: f64) -> ModalState {
        let mut v0 = Vec::with_capacity(self.modes());
        let mut v1 = Vec::with_capacity(self.modes());
        for ((a, b), w) in self.v0.iter().zip(&self.v1).zip(self.omegas()) {
            let (s, c) = (w * t).sin_cos();
            v0.push(a * c + b / w * s);
            v1.push(-a * w * s + b * c);
        }
        ModalState {
            v0,
            v1,
            basis: Arc::clone(&self.basis),
        }
    }

    /// `E = (1/2) sum (lambda_n v0[n]^2 + v1[n]^2)`.
    pub fn energy(&self) -> f64 {
        let lambda = self.basis.eigenvalues();
        0.5 * self
            .v0
            .iter()
            .zip(&self.v1)
            .zip(lambda)
            .map(|((a, b), l)| l * a * a + b * b)
            .sum::<f64>()
    }

    /// `||v||_{L2}^2 + ||v_t||_{H*}^2 = sum (v0[n]^2 + v1[n]^2 / lambda_n)`, the
    /// natural size of controlled-equation data.
    pub fn weak_energy(&self) -> f64 {
        let lambda = self.basis.eigenvalues();
        self.v0
            .iter()
            .zip(&self.v1)
            .zip(lambda)
            .map(|((a, b), l)| a * a + b * b / l)
            .sum()
    }

    pub fn energy_trace(&self, times: &[f64]) -> EnergyTrace {
        EnergyTrace {
            times: times.to_vec(),
            energy: times.iter().map(|&t| self.evolve(t).energy()).collect(),
        }
    }

    /// `v(x, t)` sampled at `x_grid`.
    pub fn displacement(&self, t: f64, x_grid: &[f64]) -> Result<crate::grid::GridFunction> {
        self.basis.synthesize(&self.evolve(t).v0, x_grid)
    }

    /// `v_x(L, t) = sum Phi'_n(L) v_n(t)` at each time.
    pub fn boundary_trace(&self, times: &[f64]) -> Vec<f64> {
        let flux = self.basis.boundary_fluxes();
        let w = self.omegas();
        times
            .iter()
            .map(|&t| {
                self.v0
                    .iter()
                    .zip(&self.v1)
                    .zip(&w)
                    .zip(flux)
                    .map(|(((a, b), w), f)| {
                        let (s, c) = (w * t).sin_cos();
                        f * (a * c + b / w * s)
                    })
                    .sum()
            })
            .collect()
    }

    /// `integral_0^T v_x(L, t)^2 dt` in closed form via the exponential Gram matrix.
    pub fn trace_l2_norm_sq(&self, horizon: f64) -> Result<f64> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(domain("trace_l2_norm_sq", format!("T must be > 0, got {horizon}")));
        }
        if self.modes() == 0 {
            return Ok(0.0);
        }
        let amps = self.to_amplitudes();
        let flux = &self.basis.boundary_fluxes()[..self.modes()];
        // trace(t) = sum_k b_k e^{i eta_k t}, eta = (+omega, -omega)
        let b: Vec<Complex64> = amps
            .c_plus
            .iter()
            .zip(flux)
            .map(|(c, f)| c * f)
            .chain(amps.c_minus.iter().zip(flux).map(|(c, f)| c * f))
            .collect();
        let g = gram_matrix(&signed_family(&self.omegas()), horizon, &TimeWeight::uniform())?;
        // integral |sum b_k e^{i eta_k t}|^2 = sum_jk b_j conj(b_k) G_jk, a quadratic form in conj(b)
        let bc: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
        Ok(g.quadratic_form(&bc).max(0.0))
    }

    /// Table `(t, v_x_at_L)`.
    pub fn trace_csv(&self, times: &[f64]) -> CsvTable {
        let mut t = CsvTable::new(&["t", "v_x_at_L"]);
        for (time, v) in times.iter().zip(self.boundary_trace(times)) {
            t.push_floats(&[*time, v]);
        }
        t
    }
}

/// `count` equally spaced times on `[0, horizon]`, endpoints included.
pub fn time_grid(horizon: f64, count: usize) -> Vec<f64> {
    crate::grid::uniform_nodes(horizon, count)
}
