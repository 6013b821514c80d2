use crate::error::{domain, Result};

/// Nodal samples of a function on an increasing (not necessarily uniform) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(domain(
                "GridFunction",
                format!("{} nodes but {} values", x.len(), values.len()),
            ));
        }
        if x.len() < 2 {
            return Err(domain("GridFunction", "need at least two nodes"));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("GridFunction", "nodes must be strictly increasing"));
        }
        Ok(Self { x, values })
    }

    pub fn from_fn(x: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = x.iter().map(|&x| f(x)).collect();
        Self::new(x, values)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Piecewise-linear interpolant; clamps outside the grid.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.values[0];
        }
        if t >= self.x[n - 1] {
            return self.values[n - 1];
        }
        let k = self.x.partition_point(|&x| x <= t) - 1;
        let w = (t - self.x[k]) / (self.x[k + 1] - self.x[k]);
        (1.0 - w) * self.values[k] + w * self.values[k + 1]
    }

    /// Trapezoid approximation of the squared L2 norm.
    pub fn l2_norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        crate::quadrature::trapezoid(&self.x, &sq)
    }
}

/// `count` equally spaced nodes on `[0, length]`, endpoints included.
pub fn uniform_nodes(length: f64, count: usize) -> Vec<f64> {
    let cells = (count - 1) as f64;
    (0..count).map(|j| length * j as f64 / cells).collect()
}

/// Nodes `length * (k / (count - 1))^grading`, clustered at `x = 0` for `grading > 1`.
pub fn graded_nodes(length: f64, grading: f64, count: usize) -> Vec<f64> {
    let cells = (count - 1) as f64;
    (0..count)
        .map(|k| {
            if k + 1 == count {
                length
            } else {
                length * (k as f64 / cells).powf(grading)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed() {
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn interpolation_is_piecewise_linear() {
        let g = GridFunction::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(g.interpolate(0.5), 1.0);
        assert_eq!(g.interpolate(2.0), 1.0);
        assert_eq!(g.interpolate(5.0), 0.0);
    }

    #[test]
    fn node_builders() {
        let u = uniform_nodes(2.0, 5);
        assert_eq!(u, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let g = graded_nodes(1.0, 2.0, 3);
        assert_eq!(g, vec![0.0, 0.25, 1.0]);
    }
}
