//! Small dense Hermitian linear algebra: cyclic Jacobi eigenvalues, Cholesky,
//! preconditioned conjugate gradient, and a tridiagonal solver.

use num_complex::Complex64;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `v^H A v`, real for Hermitian `A`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        let av = self.mul_vec(v);
        v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }

    pub fn add_diagonal(&mut self, shift: f64) {
        for i in 0..self.n {
            self.data[i * self.n + i] += shift;
        }
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.data[i * self.n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below `tol` times
/// the matrix norm (or below `tol` itself for a zero matrix).
pub fn hermitian_eigenvalues(matrix: &CMatrix, tol: f64) -> Vec<f64> {
    let n = matrix.n;
    let mut a = matrix.clone();
    let scale = a.frobenius_norm().max(1.0);
    for _sweep in 0..100 {
        if a.off_diagonal_norm() <= tol * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * u_pp + akq * u_qp);
                    a.set(k, q, akp * u_pq + akq * u_qq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, u_pp.conj() * apk + u_qp.conj() * aqk);
                    a.set(q, k, u_pq.conj() * apk + u_qq.conj() * aqk);
                }
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

/// Solve `A x = b` for Hermitian positive definite `A` by Cholesky.
/// Returns `None` if a nonpositive pivot appears.
pub fn cholesky_solve(matrix: &CMatrix, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = matrix.n;
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = matrix.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l.set(j, j, Complex64::new(d, 0.0));
        for i in (j + 1)..n {
            let mut s = matrix.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / d);
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut s = rhs[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.get(k, i).conj() * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    Some(x)
}

/// Jacobi-preconditioned conjugate gradient for Hermitian positive definite systems.
/// Returns the iterate and the final relative residual.
pub fn conjugate_gradient(
    matrix: &CMatrix,
    rhs: &[Complex64],
    rel_tol: f64,
    max_iter: usize,
) -> (Vec<Complex64>, f64) {
    let n = matrix.n;
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };
    let b_norm = norm(rhs);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    if b_norm == 0.0 {
        return (x, 0.0);
    }
    let inv_diag: Vec<f64> = (0..n).map(|i| 1.0 / matrix.get(i, i).re).collect();
    let mut r = rhs.to_vec();
    let mut z: Vec<Complex64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut rel = 1.0;
    for _ in 0..max_iter {
        let ap = matrix.mul_vec(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm(&r) / b_norm;
        if rel <= rel_tol {
            break;
        }
        z = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (x, rel)
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
/// `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Builds `Q diag(values) Q^H` from a product of random complex plane rotations.
    fn hermitian_with_spectrum(values: &[f64], seed: u64) -> CMatrix {
        let n = values.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = CMatrix::from_fn(n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        for _ in 0..(4 * n * n) {
            let p = rng.random_range(0..n);
            let r = rng.random_range(0..n);
            if p == r {
                continue;
            }
            let th: f64 = rng.random_range(0.0..6.28);
            let ph: f64 = rng.random_range(0.0..6.28);
            let e = Complex64::from_polar(1.0, ph);
            for k in 0..n {
                let a = q.get(k, p);
                let b = q.get(k, r);
                q.set(k, p, a * th.cos() - b * e * th.sin());
                q.set(k, r, a * e.conj() * th.sin() + b * th.cos());
            }
        }
        CMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| q.get(i, k) * values[k] * q.get(j, k).conj()).sum()
        })
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(2.0, 0.0),
            (1, 1) => c(-1.0, 0.0),
            (0, 1) => c(1.0, 2.0),
            _ => c(1.0, -2.0),
        });
        let e = hermitian_eigenvalues(&m, 1e-14);
        let mean = 0.5;
        let rad = (1.5f64 * 1.5 + 5.0).sqrt();
        assert!((e[0] - (mean - rad)).abs() < 1e-13);
        assert!((e[1] - (mean + rad)).abs() < 1e-13);
    }

    #[test]
    fn recovers_prescribed_spectrum() {
        let values = [-3.0, 1e-6, 0.5, 2.0, 2.0, 7.5, 11.0];
        let m = hermitian_with_spectrum(&values, 7);
        let e = hermitian_eigenvalues(&m, 1e-14);
        for (a, b) in e.iter().zip(values.iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn cholesky_and_cg_agree() {
        let values: Vec<f64> = (1..=12).map(|k| k as f64 * 0.7).collect();
        let m = hermitian_with_spectrum(&values, 3);
        let b: Vec<Complex64> = (0..12).map(|k| c(k as f64, 1.0 - k as f64 * 0.3)).collect();
        let x1 = cholesky_solve(&m, &b).unwrap();
        let (x2, rel) = conjugate_gradient(&m, &b, 1e-14, 200);
        assert!(rel <= 1e-14);
        for (a, b) in x1.iter().zip(&x2) {
            assert!((a - b).norm() < 1e-11);
        }
        let back = m.mul_vec(&x1);
        for (a, b) in back.iter().zip(&b) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = hermitian_with_spectrum(&[1.0, -1.0, 2.0], 1);
        assert!(cholesky_solve(&m, &[c(1.0, 0.0); 3]).is_none());
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let sub = [0.0, -1.0, -1.0, -1.0];
        let diag = [2.0, 2.0, 2.0, 2.0];
        let sup = [-1.0, -1.0, -1.0, 0.0];
        let rhs = [1.0, 0.0, 0.0, 1.0];
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }
}
