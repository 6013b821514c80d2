//! Eigenpairs of `-(x^alpha u')' = lambda u` on `(0, L)` with `u(L) = 0` and
//! either `u(0) = 0` (`alpha < 1`) or `(x^alpha u')(0) = 0` (`1 <= alpha < 2`).
//!
//! With `rho = (2 - alpha) / 2` and `s = (x / L)^rho` the normalised
//! eigenfunctions are
//!
//! ```text
//! Phi_n(x) = sqrt(2 rho) / (L^rho |J'_mu(j_n)|) * x^((1 - alpha) / 2) * J_mu(j_n s)
//! lambda_n = (rho j_n / L^rho)^2
//! ```
//!
//! where `j_n` are the positive zeros of `J_mu`, `mu = (1 - alpha) / (2 - alpha)`
//! in the Dirichlet regime and `mu = (alpha - 1) / (2 - alpha)` in the flux regime.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::export::CsvTable;
use crate::grid::GridFunction;
use crate::quadrature::QuadratureRule;
use crate::specfun::{bessel_derivative, bessel_pair, bessel_zeros, ln_gamma, BesselOrder};

/// Boundary condition at the degenerate endpoint `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// `u(0) = 0`, used for `0 <= alpha < 1`.
    DirichletAtZero,
    /// `(x^alpha u')(0) = 0`, used for `1 <= alpha < 2`.
    FluxAtZero,
}

impl Regime {
    pub fn for_alpha(alpha: f64) -> Self {
        if alpha < 1.0 {
            Regime::DirichletAtZero
        } else {
            Regime::FluxAtZero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    pub alpha: f64,
    pub length: f64,
    pub regime: Regime,
    pub mu: f64,
    pub rho: f64,
}

impl BasisParams {
    pub fn new(alpha: f64, length: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(domain("build_basis", format!("alpha must be >= 0, got {alpha}")));
        }
        if alpha >= 2.0 {
            return Err(Error::UnsupportedRegime { alpha });
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(domain("build_basis", format!("L must be > 0, got {length}")));
        }
        let regime = Regime::for_alpha(alpha);
        let mu = match regime {
            Regime::DirichletAtZero => (1.0 - alpha) / (2.0 - alpha),
            Regime::FluxAtZero => (alpha - 1.0) / (2.0 - alpha),
        };
        Ok(Self {
            alpha,
            length,
            regime,
            mu,
            rho: (2.0 - alpha) / 2.0,
        })
    }

    /// Bessel order of the eigenfunctions.
    pub fn order(&self) -> BesselOrder {
        BesselOrder::new(self.mu).expect("mu is nonnegative by construction")
    }
}

/// The first `N` eigenpairs, immutable once built.
#[derive(Debug)]
pub struct SpectralBasis {
    params: BasisParams,
    zeros: Vec<f64>,
    eigenvalues: Vec<f64>,
    boundary_flux: Vec<f64>,
    norm_consts: Vec<f64>,
    quadrature: OnceLock<(QuadratureRule, Vec<Vec<f64>>)>,
}

impl Clone for SpectralBasis {
    fn clone(&self) -> Self {
        Self {
            params: self.params,
            zeros: self.zeros.clone(),
            eigenvalues: self.eigenvalues.clone(),
            boundary_flux: self.boundary_flux.clone(),
            norm_consts: self.norm_consts.clone(),
            quadrature: OnceLock::new(),
        }
    }
}

/// Builds the first `modes` eigenpairs for exponent `alpha` on `(0, length)`.
pub fn build_basis(alpha: f64, length: f64, modes: usize) -> Result<SpectralBasis> {
    let params = BasisParams::new(alpha, length)?;
    if modes == 0 {
        return Err(domain("build_basis", "need at least one mode"));
    }
    let BasisParams { mu, rho, .. } = params;
    let zeros = bessel_zeros(params.order(), modes);
    let l_rho = length.powf(rho);
    let mut eigenvalues = Vec::with_capacity(modes);
    let mut boundary_flux = Vec::with_capacity(modes);
    let mut norm_consts = Vec::with_capacity(modes);
    for &j in &zeros {
        let dj = bessel_derivative(mu, j);
        let c = (2.0 * rho).sqrt() / (l_rho * dj.abs());
        eigenvalues.push((rho * j / l_rho).powi(2));
        boundary_flux.push(length.powf(-1.5) * (2.0 * rho).sqrt() * rho * j * dj.signum());
        norm_consts.push(c);
    }
    Ok(SpectralBasis {
        params,
        zeros,
        eigenvalues,
        boundary_flux,
        norm_consts,
        quadrature: OnceLock::new(),
    })
}

impl SpectralBasis {
    pub fn params(&self) -> &BasisParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn length(&self) -> f64 {
        self.params.length
    }

    pub fn mode_count(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Angular frequencies `sqrt(lambda_n)`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.sqrt()).collect()
    }

    /// All boundary fluxes `Phi'_n(L)`.
    pub fn boundary_fluxes(&self) -> &[f64] {
        &self.boundary_flux
    }

    fn check_mode(&self, routine: &'static str, mode: usize) -> Result<usize> {
        if mode == 0 || mode > self.mode_count() {
            return Err(domain(
                routine,
                format!("mode index {mode} outside 1..={}", self.mode_count()),
            ));
        }
        Ok(mode - 1)
    }

    /// `Phi'_n(L)` (mode index is 1-based).
    pub fn eigen_boundary_flux(&self, mode: usize) -> Result<f64> {
        let k = self.check_mode("eigen_boundary_flux", mode)?;
        Ok(self.boundary_flux[k])
    }

    /// `Phi_n(x)` for `0 < x <= L` (mode index is 1-based).
    pub fn eigenfunction(&self, mode: usize, x: f64) -> Result<f64> {
        let k = self.check_mode("eval_eigenfunction", mode)?;
        self.check_point("eval_eigenfunction", x)?;
        Ok(self.phi(k, x))
    }

    /// `lim_{x -> 0+} Phi_n(x)`: zero for the Dirichlet regime, the leading
    /// series coefficient for the flux regime.
    pub fn eigenfunction_at_origin(&self, mode: usize) -> Result<f64> {
        let k = self.check_mode("eval_eigenfunction", mode)?;
        Ok(self.phi_origin(k))
    }

    /// `Phi'_n(x)` for `0 < x <= L`, from Bessel identities that avoid
    /// cancellation near the origin.
    pub fn eigenfunction_derivative(&self, mode: usize, x: f64) -> Result<f64> {
        let k = self.check_mode("eigenfunction_derivative", mode)?;
        self.check_point("eigenfunction_derivative", x)?;
        Ok(self.dphi(k, x))
    }

    fn check_point(&self, routine: &'static str, x: f64) -> Result<()> {
        if !(x > 0.0 && x <= self.params.length) {
            return Err(domain(
                routine,
                format!("x = {x} outside (0, {}]; use the origin limit for x = 0", self.params.length),
            ));
        }
        Ok(())
    }

    pub(crate) fn phi(&self, k: usize, x: f64) -> f64 {
        let BasisParams { alpha, length, rho, mu, .. } = self.params;
        if x >= length {
            return 0.0;
        }
        let z = self.zeros[k] * (x / length).powf(rho);
        self.norm_consts[k] * x.powf(0.5 * (1.0 - alpha)) * bessel_pair(mu, z).0
    }

    pub(crate) fn phi_origin(&self, k: usize) -> f64 {
        let BasisParams { alpha, length, mu, .. } = self.params;
        match self.params.regime {
            Regime::DirichletAtZero => 0.0,
            Regime::FluxAtZero => {
                let lead = (mu * (0.5 * self.zeros[k]).ln()
                    - ln_gamma(mu + 1.0).expect("mu + 1 > 0"))
                .exp();
                self.norm_consts[k] * length.powf(0.5 * (1.0 - alpha)) * lead
            }
        }
    }

    /// `Phi_n` on any `x >= 0`, taking the limit at the origin.
    pub(crate) fn phi_or_limit(&self, k: usize, x: f64) -> f64 {
        if x <= 0.0 {
            self.phi_origin(k)
        } else {
            self.phi(k, x)
        }
    }

    pub(crate) fn dphi(&self, k: usize, x: f64) -> f64 {
        let BasisParams { alpha, length, rho, mu, .. } = self.params;
        let j = self.zeros[k];
        let s = (x / length).powf(rho);
        let z = j * s;
        let (jm, jm1) = bessel_pair(mu, z);
        let shape = match self.params.regime {
            Regime::DirichletAtZero => 2.0 * mu / z * jm - jm1,
            Regime::FluxAtZero => -jm1,
        };
        self.norm_consts[k] * rho * j * (s / x) * x.powf(0.5 * (1.0 - alpha)) * shape
    }

    /// Quadrature rule on `[0, L]` graded like `x_k = L (k / K)^(2 / (2 - alpha))`,
    /// `K = max(64, 16 N)`, with each `Phi_n` tabulated at its nodes.
    fn quadrature(&self) -> &(QuadratureRule, Vec<Vec<f64>>) {
        self.quadrature.get_or_init(|| {
            let panels = 64.max(16 * self.mode_count());
            let rule = QuadratureRule::graded(self.params.length, 1.0 / self.params.rho, panels, 8);
            let table = (0..self.mode_count())
                .map(|k| rule.nodes.iter().map(|&x| self.phi(k, x)).collect())
                .collect();
            (rule, table)
        })
    }

    /// Graded quadrature rule used for projections (shared with callers that
    /// need to integrate against the basis).
    pub fn quadrature_rule(&self) -> &QuadratureRule {
        &self.quadrature().0
    }

    /// Coefficients `f_n = integral_0^L f Phi_n dx`.
    pub fn project(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let (rule, table) = self.quadrature();
        let fx: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        table
            .iter()
            .map(|phi| phi.iter().zip(&rule.weights).zip(&fx).map(|((p, w), f)| p * w * f).sum())
            .collect()
    }

    /// Minimum number of grid samples accepted by [`Self::project_grid`]
    /// (8 per full oscillation of `Phi_N`).
    pub fn required_samples(&self) -> usize {
        4 * self.mode_count() + 1
    }

    /// Projects grid samples (piecewise-linear interpolant) onto the basis.
    pub fn project_grid(&self, f: &GridFunction) -> Result<Vec<f64>> {
        let required = self.required_samples();
        if f.len() < required {
            return Err(Error::Resolution {
                routine: "project",
                required,
                available: f.len(),
            });
        }
        let l = self.params.length;
        let (first, last) = (f.x[0], f.x[f.len() - 1]);
        if first > 1e-12 * l || (last - l).abs() > 1e-12 * l {
            return Err(domain("project", format!("grid spans [{first}, {last}], expected [0, {l}]")));
        }
        Ok(self.project(|x| f.interpolate(x)))
    }

    /// `sum_n coeffs[n] Phi_n` sampled at `x_grid` (taking the origin limit at 0).
    pub fn synthesize(&self, coeffs: &[f64], x_grid: &[f64]) -> Result<GridFunction> {
        if coeffs.len() > self.mode_count() {
            return Err(domain(
                "synthesize",
                format!("{} coefficients for a {}-mode basis", coeffs.len(), self.mode_count()),
            ));
        }
        let values = x_grid
            .iter()
            .map(|&x| coeffs.iter().enumerate().map(|(k, c)| c * self.phi_or_limit(k, x)).sum())
            .collect();
        GridFunction::new(x_grid.to_vec(), values)
    }

    /// `||x^(alpha/2) u'||^2` for `u = sum coeffs[n] Phi_n`.
    pub fn seminorm_sq(&self, coeffs: &[f64]) -> f64 {
        coeffs.iter().zip(&self.eigenvalues).map(|(c, l)| l * c * c).sum()
    }

    /// Full `H^1_alpha` norm squared, `||u||^2 + ||x^(alpha/2) u'||^2`.
    /// The two are equivalent with constants `1` and `1 + 1 / lambda_1`.
    pub fn h1_alpha_norm_sq(&self, coeffs: &[f64]) -> f64 {
        coeffs.iter().map(|c| c * c).sum::<f64>() + self.seminorm_sq(coeffs)
    }

    /// `||u||_{L2} / ||x^(alpha/2) u'||_{L2}` for `u = sum coeffs[n] Phi_n`,
    /// using orthonormality and `integral x^alpha Phi_n' Phi_m' = lambda_n delta_nm`.
    pub fn hardy_poincare_ratio_modal(&self, coeffs: &[f64]) -> Result<f64> {
        let mass: f64 = coeffs.iter().map(|c| c * c).sum();
        let energy = self.seminorm_sq(coeffs);
        if energy <= 0.0 {
            return Err(Error::DegenerateInput {
                routine: "hardy_poincare_ratio",
                detail: "zero weighted-derivative energy".into(),
            });
        }
        Ok((mass / energy).sqrt())
    }

    /// Basis table with columns `n, j_mu_n, lambda_n, flux_L`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["n", "j_mu_n", "lambda_n", "flux_L"]);
        for k in 0..self.mode_count() {
            t.push_indexed(
                (k + 1) as i64,
                &[self.zeros[k], self.eigenvalues[k], self.boundary_flux[k]],
            );
        }
        t
    }
}

/// `||u||_{L2} / ||x^(alpha/2) u'||_{L2}` for grid samples `u`.
///
/// The L2 norm uses the trapezoid rule; the weighted derivative uses cell
/// differences weighted by `x_mid^alpha`.
pub fn hardy_poincare_ratio(u: &GridFunction, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain("hardy_poincare_ratio", format!("alpha must lie in (0, 2), got {alpha}")));
    }
    let mass = u.l2_norm_sq();
    let mut energy = 0.0;
    for k in 0..u.len() - 1 {
        let h = u.x[k + 1] - u.x[k];
        let mid = 0.5 * (u.x[k] + u.x[k + 1]);
        let slope = (u.values[k + 1] - u.values[k]) / h;
        energy += mid.powf(alpha) * slope * slope * h;
    }
    if energy <= 0.0 || !energy.is_finite() {
        return Err(Error::DegenerateInput {
            routine: "hardy_poincare_ratio",
            detail: "zero weighted-derivative energy".into(),
        });
    }
    Ok((mass / energy).sqrt())
}
