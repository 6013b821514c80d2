//! Gauss-Legendre rules and composite rules on graded meshes.

use std::f64::consts::PI;

/// Nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed set of nodes and weights approximating `integral f(x) dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Composite Gauss-Legendre rule with `panels` equal panels on `[a, b]`.
    pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let left = a + p as f64 * h;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(left + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    /// Composite rule on `[0, length]` graded towards `x = 0`.
    ///
    /// The cells are `x_k = length * (k / panels)^grading`; integration is done
    /// in the grading variable `u = (x / length)^(1 / grading)` with the
    /// Jacobian folded into the weights. The first cell is further split
    /// geometrically (halving, down to `u ~ 1e-62` or the underflow limit) so integrable power
    /// singularities at the origin are resolved.
    pub fn graded(length: f64, grading: f64, panels: usize, order: usize) -> Self {
        const RATIO: f64 = 0.5;
        const LEVELS: usize = 200;
        let (gx, gw) = gauss_legendre(order);
        let du = 1.0 / panels as f64;
        let mut cells = Vec::with_capacity(panels + LEVELS);
        // keep x = length u^grading clear of underflow
        let floor = 1e-280f64.powf(1.0 / grading);
        let mut hi = du;
        for _ in 0..LEVELS {
            let lo = hi * RATIO;
            if lo < floor {
                break;
            }
            cells.push((lo, hi));
            hi = lo;
        }
        cells.reverse();
        for k in 1..panels {
            cells.push((k as f64 * du, (k + 1) as f64 * du));
        }
        let mut nodes = Vec::with_capacity(cells.len() * order);
        let mut weights = Vec::with_capacity(cells.len() * order);
        for (lo, hi) in cells {
            let half = 0.5 * (hi - lo);
            for (x, w) in gx.iter().zip(&gw) {
                let u = lo + half * (x + 1.0);
                nodes.push(length * u.powf(grading));
                weights.push(half * w * length * grading * u.powf(grading - 1.0));
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Trapezoid rule for samples on a (possibly non-uniform) grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}
