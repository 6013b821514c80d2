//! Gamma function and Bessel functions of the first kind of real order `mu >= 0`.
//!
//! `J_mu(x)` is evaluated by one of three routes depending on the argument:
//!
//! * ascending power series for `x <= 2`,
//! * Miller backward recurrence on the fractional part of the order, normalised
//!   by the Neumann sum `sum_k (f + 2k) Gamma(f + k) / k! J_{f+2k}(x) = (x/2)^f`,
//!   for the intermediate range,
//! * Hankel asymptotic expansion for `x >= 25 + mu^2`, truncated at the
//!   smallest term.
//!
//! The series alone loses about four digits to cancellation at `x = 12`, which
//! is why the intermediate range exists.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SERIES_LIMIT: f64 = 2.0;
const HANKEL_OFFSET: f64 = 25.0;

/// Order of a Bessel function of the first kind. Always finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(domain("BesselOrder", format!("order must be finite and >= 0, got {mu}")));
        }
        Ok(Self(mu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Gamma function for positive real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("gamma", format!("expected finite x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Gamma(x) = Gamma(x + 1) / x keeps the Lanczos sum in its accurate range.
        return gamma_unchecked(x + 1.0) / x;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // Split the power so that t^(z + 1/2) does not overflow before e^-t damps it.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(z)
}

/// Natural logarithm of the Gamma function for positive real arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("ln_gamma", format!("expected finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `J_mu(x)` for `x >= 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain("bessel_j", format!("expected finite x >= 0, got {x}")));
    }
    Ok(bessel_pair(order.0, x).0)
}

/// `J'_mu(x)` for `x > 0`, via `J'_mu = (mu / x) J_mu - J_{mu+1}`.
pub fn bessel_j_prime(order: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("bessel_j_prime", format!("expected finite x > 0, got {x}")));
    }
    let (j, j_next) = bessel_pair(order.0, x);
    Ok(order.0 / x * j - j_next)
}

/// `(J_nu(x), J_{nu+1}(x))` without argument checks. Requires `nu >= 0`, `x >= 0`.
pub(crate) fn bessel_pair(nu: f64, x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT {
        (series(nu, x), series(nu + 1.0, x))
    } else if x >= HANKEL_OFFSET + nu * nu {
        (hankel(nu, x), hankel(nu + 1.0, x))
    } else {
        miller(nu, x)
    }
}

/// `J'_nu(x) = (nu / x) J_nu(x) - J_{nu+1}(x)` without argument checks.
pub(crate) fn bessel_derivative(nu: f64, x: f64) -> f64 {
    let (j, j_next) = bessel_pair(nu, x);
    nu / x * j - j_next
}

fn series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - ln_gamma_unchecked(nu + 1.0)).exp();
    let mut sum = term;
    let q = -half * half;
    for m in 1..500 {
        let mf = m as f64;
        term *= q / (mf * (mf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn hankel(nu: f64, x: f64) -> f64 {
    let mu4 = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu4 - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        // a_k / x^k enters P (even k) or Q (odd k) with alternating signs.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
        k += 1;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Backward recurrence on orders `f + k` (`f` the fractional part of `nu`),
/// normalised with the Neumann sum over even offsets.
fn miller(nu: f64, x: f64) -> (f64, f64) {
    let whole = nu.floor();
    let frac = nu - whole;
    let target = whole as usize;
    let reach = x.max(whole + 1.0);
    let mut top = (reach + 20.0 + 10.0 * reach.cbrt()).ceil() as usize;
    top += top % 2;

    // Neumann coefficients d_m for J_{frac + 2m}.
    let half_top = top / 2;
    let mut coeffs = Vec::with_capacity(half_top + 1);
    coeffs.push(1.0);
    let mut rising = 1.0;
    for m in 1..=half_top {
        let mf = m as f64;
        coeffs.push((frac + 2.0 * mf) / mf * rising);
        rising *= (frac + mf) / mf;
    }

    let mut above = 0.0; // J_{frac + k + 1}
    let mut current = 1e-280; // J_{frac + k}
    let mut sum = 0.0;
    let mut captured = (0.0, 0.0);
    for k in (0..=top).rev() {
        if k % 2 == 0 {
            sum += coeffs[k / 2] * current;
        }
        if k == target {
            captured = (current, above);
        }
        if k == 0 {
            break;
        }
        let below = 2.0 * (frac + k as f64) / x * current - above;
        above = current;
        current = below;
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            sum *= 1e-250;
            captured.0 *= 1e-250;
            captured.1 *= 1e-250;
        }
    }
    let norm = (frac * (0.5 * x).ln() - ln_gamma_unchecked(frac + 1.0)).exp();
    let scale = norm / sum;
    (captured.0 * scale, captured.1 * scale)
}

fn mcmahon_guess(nu: f64, n: usize) -> f64 {
    let beta = (n as f64 + 0.5 * nu - 0.25) * PI;
    beta - (4.0 * nu * nu - 1.0) / (8.0 * beta)
}

/// First `count` positive zeros of `J_mu`, ascending.
///
/// Each zero is bracketed by a forward sign scan (steps of 1, below the
/// smallest possible spacing) and refined by Newton iteration started from the
/// McMahon estimate, with bisection whenever a step leaves the bracket.
pub fn bessel_zeros(order: BesselOrder, count: usize) -> Vec<f64> {
    let nu = order.0;
    let mut zeros = Vec::with_capacity(count);
    let mut lo = (nu * (nu + 2.0)).sqrt().max(0.25);
    let mut f_lo = bessel_pair(nu, lo).0;
    if f_lo == 0.0 {
        f_lo = f64::MIN_POSITIVE;
    }
    for n in 1..=count {
        let mut hi = lo + 1.0;
        let mut f_hi = bessel_pair(nu, hi).0;
        while f_hi.signum() == f_lo.signum() && f_hi != 0.0 {
            lo = hi;
            f_lo = f_hi;
            hi += 1.0;
            f_hi = bessel_pair(nu, hi).0;
        }
        let zero = if f_hi == 0.0 {
            hi
        } else {
            refine_zero(nu, lo, hi, f_lo, mcmahon_guess(nu, n))
        };
        zeros.push(zero);
        lo = zero + 0.5;
        f_lo = bessel_pair(nu, lo).0;
    }
    zeros
}

fn refine_zero(nu: f64, mut lo: f64, mut hi: f64, f_lo: f64, guess: f64) -> f64 {
    let sign_lo = f_lo.signum();
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let tol = 4.0 * f64::EPSILON * hi;
    for _ in 0..200 {
        let (j, j_next) = bessel_pair(nu, x);
        if j == 0.0 {
            return x;
        }
        if j.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let slope = nu / x * j - j_next;
        let newton = x - j / slope;
        if (newton - x).abs() <= tol {
            return newton;
        }
        x = if newton >= lo && newton <= hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= tol {
            return x;
        }
    }
    x
}
