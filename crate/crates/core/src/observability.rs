//! Controllability time, counting density, Gram spectra and observability ratios.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exponential::{gram_matrix, signed_family, TimeWeight};
use crate::export::CsvTable;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::modal::ModalState;
use crate::quadrature::QuadratureRule;
use crate::sampling::unit_sphere;
use crate::spectral::{build_basis, SpectralBasis};

/// Off-diagonal tolerance of the Jacobi eigensolver, relative to the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-12;

fn check_alpha(routine: &'static str, alpha: f64, length: f64) -> Result<()> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(domain(
            routine,
            format!("alpha = {alpha} outside [0, 2); for alpha >= 2 the time is infinite (see liouville)"),
        ));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(domain(routine, format!("L must be > 0, got {length}")));
    }
    Ok(())
}

/// `T_alpha = 4 / (2 - alpha) L^((2 - alpha) / 2)`.
pub fn controllability_time(alpha: f64, length: f64) -> Result<f64> {
    check_alpha("controllability_time", alpha, length)?;
    Ok(4.0 / (2.0 - alpha) * length.powf(0.5 * (2.0 - alpha)))
}

/// `integral_0^L x^(-alpha/2) dx` by graded Gauss-Legendre quadrature.
///
/// The grading `x = L u^(2 / (2 - alpha))` turns the integrand into a constant,
/// so the rule is exact up to rounding.
pub fn characteristic_travel_time(alpha: f64, length: f64) -> Result<f64> {
    check_alpha("characteristic_travel_time", alpha, length)?;
    let rule = QuadratureRule::graded(length, 2.0 / (2.0 - alpha), 16, 8);
    Ok(rule.integrate(|x| x.powf(-0.5 * alpha)))
}

/// `D+ = L^rho / (rho pi)`.
pub fn counting_density_formula(alpha: f64, length: f64) -> Result<f64> {
    check_alpha("counting_density", alpha, length)?;
    let rho = 0.5 * (2.0 - alpha);
    Ok(length.powf(rho) / (rho * std::f64::consts::PI))
}

/// Empirical `n+(r) / r` for the frequencies `eta_n = rho j_n / L^rho`, taken
/// at `r = eta_K` (the largest window the zero table allows).
pub fn counting_density(zeros: &[f64], rho: f64, length: f64) -> Result<f64> {
    if zeros.len() < 100 {
        return Err(Error::Resolution {
            routine: "counting_density",
            required: 100,
            available: zeros.len(),
        });
    }
    let eta_max = rho * zeros[zeros.len() - 1] / length.powf(rho);
    Ok(zeros.len() as f64 / eta_max)
}

/// Hermitian Gram matrix of `{+-sqrt(lambda_n)}` on `[0, T]`.
pub fn basis_gram(basis: &SpectralBasis, horizon: f64) -> Result<CMatrix> {
    gram_matrix(&signed_family(&basis.frequencies()), horizon, &TimeWeight::uniform())
}

/// Ascending eigenvalues of the Gram matrix of `exponents` on `[0, T]`.
pub fn gram_spectrum(exponents: &[f64], horizon: f64) -> Result<Vec<f64>> {
    let g = gram_matrix(exponents, horizon, &TimeWeight::uniform())?;
    Ok(hermitian_eigenvalues(&g, JACOBI_TOL))
}

/// Smallest eigenvalue of the `2N x 2N` Gram matrix of the basis frequencies.
pub fn gram_min_eigenvalue(basis: &SpectralBasis, horizon: f64) -> Result<f64> {
    Ok(gram_spectrum(&signed_family(&basis.frequencies()), horizon)?[0])
}

/// `(sum lambda_n v0^2 + sum v1^2) / integral_0^T v_x(L, t)^2 dt`.
pub fn observability_ratio(state: &ModalState, horizon: f64) -> Result<f64> {
    let numerator = 2.0 * state.energy();
    if numerator == 0.0 {
        return Err(Error::DegenerateInput {
            routine: "observability_ratio",
            detail: "zero state".into(),
        });
    }
    let trace = state.trace_l2_norm_sq(horizon)?;
    if trace == 0.0 {
        return Err(Error::DegenerateInput {
            routine: "observability_ratio",
            detail: "boundary trace vanishes identically".into(),
        });
    }
    Ok(numerator / trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Self { min, max, mean }
    }

    /// Largest relative deviation of an entry from the mean.
    pub fn spread(&self) -> f64 {
        ((self.max - self.mean) / self.mean).max((self.mean - self.min) / self.mean)
    }
}

/// Empirical and exact Ingham constants of an exponential family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InghamCheck {
    /// Extremes of `integral |sum a_k e^{i eta_k t}|^2 / sum |a_k|^2` over the draws.
    pub c_low: f64,
    pub c_high: f64,
    /// Gram spectrum bounds.
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Random coefficient draws uniform on the unit sphere of `C^K` compared with
/// the Gram spectrum.
pub fn ingham_two_sided_check_family(
    exponents: &[f64],
    horizon: f64,
    trials: usize,
    rng: &mut impl rand::Rng,
) -> Result<InghamCheck> {
    if trials < 10 {
        return Err(domain("ingham_two_sided_check", format!("need at least 10 trials, got {trials}")));
    }
    let g = gram_matrix(exponents, horizon, &TimeWeight::uniform())?;
    let spectrum = hermitian_eigenvalues(&g, JACOBI_TOL);
    let k = exponents.len();
    let mut c_low = f64::INFINITY;
    let mut c_high = f64::NEG_INFINITY;
    for _ in 0..trials {
        let p = unit_sphere(2 * k, rng);
        let a: Vec<Complex64> = (0..k).map(|i| Complex64::new(p[i], p[k + i])).collect();
        // integral |sum a_k e^{i eta_k t}|^2 = q(conj a)
        let conj: Vec<Complex64> = a.iter().map(|z| z.conj()).collect();
        let v = g.quadratic_form(&conj);
        c_low = c_low.min(v);
        c_high = c_high.max(v);
    }
    Ok(InghamCheck {
        c_low,
        c_high,
        lambda_min: spectrum[0],
        lambda_max: spectrum[k - 1],
    })
}

pub fn ingham_two_sided_check(
    basis: &SpectralBasis,
    horizon: f64,
    trials: usize,
    rng: &mut impl rand::Rng,
) -> Result<InghamCheck> {
    ingham_two_sided_check_family(&signed_family(&basis.frequencies()), horizon, trials, rng)
}

/// `integral_0^T v_x(L, t)^2 dt / E(0)` over random unit-energy states.
pub fn hidden_regularity_constants(
    basis: &Arc<SpectralBasis>,
    modes: usize,
    horizon: f64,
    trials: usize,
    rng: &mut impl rand::Rng,
) -> Result<Vec<f64>> {
    (0..trials)
        .map(|_| {
            let s = ModalState::random_unit_energy(Arc::clone(basis), modes, rng)?;
            Ok(s.trace_l2_norm_sq(horizon)? / s.energy())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservabilityReport {
    pub alpha: f64,
    #[serde(rename = "length_L")]
    pub length: f64,
    #[serde(rename = "horizon_T")]
    pub horizon: f64,
    #[serde(rename = "mode_count_N")]
    pub modes: usize,
    #[serde(rename = "T_alpha")]
    pub t_alpha: f64,
    #[serde(rename = "D_plus")]
    pub d_plus: f64,
    pub gram_min_eigenvalue: f64,
    pub ratio_stats: Stats,
}

/// Report for one `(alpha, L, T, N)`; the ratio statistics are over `trials`
/// random unit-energy states.
pub fn observability_report(
    basis: &Arc<SpectralBasis>,
    horizon: f64,
    trials: usize,
    rng: &mut impl rand::Rng,
) -> Result<ObservabilityReport> {
    let alpha = basis.alpha();
    let length = basis.length();
    let n = basis.mode_count();
    let ratios = (0..trials.max(1))
        .map(|_| observability_ratio(&ModalState::random_unit_energy(Arc::clone(basis), n, rng)?, horizon))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ObservabilityReport {
        alpha,
        length,
        horizon,
        modes: n,
        t_alpha: controllability_time(alpha, length)?,
        d_plus: counting_density_formula(alpha, length)?,
        gram_min_eigenvalue: gram_min_eigenvalue(basis, horizon)?,
        ratio_stats: Stats::of(&ratios),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub horizon: f64,
    pub modes: usize,
    pub lambda_min: f64,
}

/// `lambda_min` of the Gram matrix at one sweep point.
pub fn sweep_point(alpha: f64, length: f64, horizon: f64, modes: usize) -> Result<SweepPoint> {
    let basis = build_basis(alpha, length, modes)?;
    Ok(SweepPoint {
        alpha,
        horizon,
        modes,
        lambda_min: gram_min_eigenvalue(&basis, horizon)?,
    })
}

pub fn sweep_csv(points: &[SweepPoint]) -> CsvTable {
    let mut t = CsvTable::new(&["alpha", "T", "N", "lambda_min"]);
    for p in points {
        t.push_floats(&[p.alpha, p.horizon, p.modes as f64, p.lambda_min]);
    }
    t
}

/// Decay factor `lambda_min(N_large) / lambda_min(N_small)` at horizon `T`.
pub fn gram_decay_ratio(alpha: f64, length: f64, horizon: f64, n_small: usize, n_large: usize) -> Result<f64> {
    let large = build_basis(alpha, length, n_large)?;
    let small_family = signed_family(&large.frequencies()[..n_small]);
    let small = gram_spectrum(&small_family, horizon)?[0];
    Ok(gram_min_eigenvalue(&large, horizon)? / small)
}

/// Bisection on `T` in `[lo, hi]` for the horizon where the decay factor
/// between `n_small` and `n_large` modes crosses `threshold`.
pub fn bracket_threshold_time(
    alpha: f64,
    length: f64,
    n_small: usize,
    n_large: usize,
    threshold: f64,
    (mut lo, mut hi): (f64, f64),
    iterations: usize,
) -> Result<f64> {
    let ratio = |t: f64| gram_decay_ratio(alpha, length, t, n_small, n_large);
    if ratio(lo)? >= threshold || ratio(hi)? < threshold {
        return Err(domain("bracket_threshold_time", "threshold not bracketed by the search interval"));
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if ratio(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng_from_seed;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn controllability_time_examples() {
        assert_eq!(controllability_time(0.0, 1.0).unwrap(), 2.0);
        assert_eq!(controllability_time(0.0, 3.5).unwrap(), 7.0);
        assert_relative_eq!(controllability_time(1.0, 1.0).unwrap(), 4.0, max_relative = 1e-15);
        assert_relative_eq!(controllability_time(1.5, 2.0).unwrap(), 8.0 * 2f64.powf(0.25), max_relative = 1e-14);
        assert!(controllability_time(2.0, 1.0).is_err());
    }

    #[test]
    fn travel_time_examples() {
        assert_relative_eq!(characteristic_travel_time(0.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(characteristic_travel_time(1.0, 1.0).unwrap(), 2.0, max_relative = 1e-14);
        let t = characteristic_travel_time(1.9, 1.0).unwrap();
        assert!((t - 20.0).abs() < 1e-10);
        assert!(characteristic_travel_time(2.0, 1.0).is_err());
    }

    #[test]
    fn density_examples() {
        let zeros: Vec<f64> = (1..=500).map(|n| n as f64 * PI).collect();
        let d = counting_density(&zeros, 1.0, 1.0).unwrap();
        assert!((d * PI - 1.0).abs() < 0.01);
        assert_relative_eq!(counting_density_formula(1.0, 1.0).unwrap(), 2.0 / PI, max_relative = 1e-15);
        assert!(matches!(counting_density(&zeros[..50], 1.0, 1.0), Err(Error::Resolution { .. })));
    }

    #[test]
    fn two_by_two_gram() {
        let b = build_basis(0.5, 1.0, 1).unwrap();
        let big_t = 1.7;
        let eta = b.frequencies()[0];
        let off = crate::exponential::exp_integral(2.0 * eta, big_t).norm();
        let s = gram_spectrum(&signed_family(&[eta]), big_t).unwrap();
        assert_relative_eq!(s[0], big_t - off, max_relative = 1e-12);
        assert_relative_eq!(s[1], big_t + off, max_relative = 1e-12);
        assert!(s[0] > 0.0);
    }

    #[test]
    fn observability_ratio_examples() {
        let b = Arc::new(build_basis(0.0, 1.0, 1).unwrap());
        let s = ModalState::new(b.clone(), vec![1.0], vec![0.0]).unwrap();
        assert_relative_eq!(observability_ratio(&s, 2.0).unwrap(), 0.5, max_relative = 1e-13);
        assert_relative_eq!(observability_ratio(&s, 4.0).unwrap(), 0.25, max_relative = 1e-13);
        let z = ModalState::zero(b, 1).unwrap();
        assert!(matches!(observability_ratio(&z, 2.0), Err(Error::DegenerateInput { .. })));
    }

    #[test]
    fn orthogonal_family_has_parseval_constants() {
        let eta: Vec<f64> = (1..=6).map(|n| n as f64 * PI).chain((1..=6).map(|n| -(n as f64) * PI)).collect();
        let c = ingham_two_sided_check_family(&eta, 2.0, 20, &mut rng_from_seed(1)).unwrap();
        for v in [c.c_low, c.c_high, c.lambda_min, c.lambda_max] {
            assert_relative_eq!(v, 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn random_draws_lie_inside_gram_bounds() {
        let b = build_basis(0.5, 1.0, 10).unwrap();
        let t = 1.2 * controllability_time(0.5, 1.0).unwrap();
        let c = ingham_two_sided_check(&b, t, 50, &mut rng_from_seed(9)).unwrap();
        assert!(c.lambda_min > 0.0);
        assert!(c.c_low >= c.lambda_min * (1.0 - 1e-10));
        assert!(c.c_high <= c.lambda_max * (1.0 + 1e-10));
    }

    #[test]
    fn report_is_consistent() {
        let b = Arc::new(build_basis(1.0, 1.0, 6).unwrap());
        let r = observability_report(&b, 4.8, 20, &mut rng_from_seed(4)).unwrap();
        assert_relative_eq!(2.0 * PI * r.d_plus, r.t_alpha, max_relative = 1e-12);
        assert!(r.gram_min_eigenvalue > 0.0);
        assert!(r.ratio_stats.min > 0.0 && r.ratio_stats.min <= r.ratio_stats.max);
    }
}
