//! Gram matrices of finite families of complex exponentials `e^{i eta_k t}` on `[0, T]`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::CMatrix;

/// `integral_0^T e^{i delta t} dt`, exact including the `delta -> 0` limit.
pub fn exp_integral(delta: f64, horizon: f64) -> Complex64 {
    let half = 0.5 * delta * horizon;
    // 2 sin(delta T / 2) / delta, written as T sinc so it is smooth at delta = 0
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(horizon * sinc, half)
}

/// Nonnegative time weight `rho(t) = sum_m r_m cos(m Omega t)` on `[0, T]`,
/// `Omega = 2 pi / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeWeight {
    coeffs: Vec<f64>,
}

impl TimeWeight {
    /// `rho = 1`.
    pub fn uniform() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// `rho = sin^4(pi t / T)`, vanishing to fourth order at both ends.
    pub fn sin_fourth() -> Self {
        Self {
            coeffs: vec![0.375, -0.5, 0.125],
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.coeffs == [1.0]
    }

    /// Cosine coefficients `r_0, r_1, ...`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `rho^2`, via `cos a cos b = (cos(a + b) + cos(a - b)) / 2`.
    pub fn squared(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in self.coeffs.iter().enumerate() {
                let half = 0.5 * a * b;
                out[i + j] += half;
                out[i.abs_diff(j)] += half;
            }
        }
        Self { coeffs: out }
    }

    pub fn value(&self, t: f64, horizon: f64) -> f64 {
        let omega = 2.0 * std::f64::consts::PI / horizon;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, r)| r * (m as f64 * omega * t).cos())
            .sum()
    }

    /// `integral_0^T rho(t) e^{i delta t} dt`.
    pub fn weighted_integral(&self, delta: f64, horizon: f64) -> Complex64 {
        let omega = 2.0 * std::f64::consts::PI / horizon;
        let mut acc = self.coeffs[0] * exp_integral(delta, horizon);
        for (m, r) in self.coeffs.iter().enumerate().skip(1) {
            let shift = m as f64 * omega;
            acc += 0.5 * r * (exp_integral(delta + shift, horizon) + exp_integral(delta - shift, horizon));
        }
        acc
    }
}

/// `G_{jk} = integral_0^T rho(t) e^{i (eta_j - eta_k) t} dt`.
///
/// Fails if two exponents coincide (to relative 1e-12), which would make the
/// matrix singular.
pub fn gram_matrix(exponents: &[f64], horizon: f64, weight: &TimeWeight) -> Result<CMatrix> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(domain("gram_matrix", format!("T must be > 0, got {horizon}")));
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_by(f64::total_cmp);
    for w in sorted.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-12 * w[0].abs().max(w[1].abs()).max(1.0) {
            return Err(Error::DegenerateFamily {
                routine: "gram_matrix",
                first: w[0],
                second: w[1],
            });
        }
    }
    let n = exponents.len();
    let mut g = CMatrix::zeros(n);
    for j in 0..n {
        for k in j..n {
            let v = weight.weighted_integral(exponents[j] - exponents[k], horizon);
            g.set(j, k, v);
            g.set(k, j, v.conj());
        }
        let d = g.get(j, j).re;
        g.set(j, j, Complex64::new(d, 0.0));
    }
    Ok(g)
}

/// Signed exponent family `(+omega_1, ..., +omega_N, -omega_1, ..., -omega_N)`.
pub fn signed_family(frequencies: &[f64]) -> Vec<f64> {
    frequencies.iter().copied().chain(frequencies.iter().map(|w| -w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadratureRule;
    use approx::assert_relative_eq;

    #[test]
    fn integral_matches_quadrature() {
        let rule = QuadratureRule::composite(0.0, 2.5, 200, 8);
        for delta in [0.0, 1e-9, 0.3, -4.0, 17.0] {
            let re = rule.integrate(|t| (delta * t).cos());
            let im = rule.integrate(|t| (delta * t).sin());
            let z = exp_integral(delta, 2.5);
            assert!((z.re - re).abs() < 1e-13 && (z.im - im).abs() < 1e-13, "delta {delta}");
        }
    }

    #[test]
    fn weighted_integral_matches_quadrature() {
        let horizon = 3.0;
        let rule = QuadratureRule::composite(0.0, horizon, 300, 8);
        let w = TimeWeight::sin_fourth();
        for delta in [0.0, 2.0 * std::f64::consts::PI / horizon, 0.7, -9.0] {
            let z = w.weighted_integral(delta, horizon);
            let re = rule.integrate(|t| w.value(t, horizon) * (delta * t).cos());
            let im = rule.integrate(|t| w.value(t, horizon) * (delta * t).sin());
            assert!((z.re - re).abs() < 1e-13 && (z.im - im).abs() < 1e-13, "delta {delta}");
        }
        let t = 0.7;
        let s = (std::f64::consts::PI * t / horizon).sin();
        assert_relative_eq!(w.value(t, horizon), s.powi(4), max_relative = 1e-14);
        assert_relative_eq!(w.squared().value(t, horizon), s.powi(8), max_relative = 1e-13);
    }

    #[test]
    fn gram_is_hermitian_with_horizon_diagonal() {
        let g = gram_matrix(&signed_family(&[1.0, 2.5]), 2.0, &TimeWeight::uniform()).unwrap();
        for j in 0..4 {
            assert_eq!(g.get(j, j), Complex64::new(2.0, 0.0));
            for k in 0..4 {
                assert_eq!(g.get(j, k), g.get(k, j).conj());
            }
        }
    }

    #[test]
    fn duplicates_rejected() {
        let r = gram_matrix(&[1.0, 2.0, 1.0], 1.0, &TimeWeight::uniform());
        assert!(matches!(r, Err(Error::DegenerateFamily { .. })));
        assert!(gram_matrix(&[1.0], 0.0, &TimeWeight::uniform()).is_err());
    }
}
