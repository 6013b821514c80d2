use degenwave::spectral::build_basis;
use std::f64::consts::PI;

#[test]
fn orthonormal_up_to_twenty_modes() {
    for alpha in [0.3, 0.5, 1.0, 1.5] {
        let b = build_basis(alpha, 1.0, 20).unwrap();
        let rule = b.quadrature_rule();
        // tabulate each mode once on the rule's nodes
        let table: Vec<Vec<f64>> = (1..=20)
            .map(|n| rule.nodes.iter().map(|&x| b.eigenfunction(n, x).unwrap()).collect())
            .collect();
        let mut worst: f64 = 0.0;
        for n in 0..20 {
            for m in 0..=n {
                let g: f64 = rule.weights.iter().enumerate().map(|(i, w)| w * table[n][i] * table[m][i]).sum();
                let want = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
        assert!(worst <= 1e-8, "alpha {alpha}: {worst:e}");
    }
}

#[test]
fn eigen_equation_residual() {
    for alpha in [0.3, 0.5, 1.0, 1.5] {
        let b = build_basis(alpha, 1.0, 20).unwrap();
        for n in [1usize, 2, 5, 10, 20] {
            let lambda = b.eigenvalues()[n - 1];
            let flux = |x: f64| x.powf(alpha) * b.eigenfunction_derivative(n, x).unwrap();
            let mut worst: f64 = 0.0;
            for k in 0..200 {
                // geometric grid from 1e-3 to just inside L
                let x = 1e-3 * (0.99e3f64).powf(k as f64 / 199.0);
                let h = 1e-3 * x;
                let d = (8.0 * (flux(x + h) - flux(x - h)) - (flux(x + 2.0 * h) - flux(x - 2.0 * h))) / (12.0 * h);
                let r = d + lambda * b.eigenfunction(n, x).unwrap();
                worst = worst.max(r.abs());
            }
            assert!(worst <= 1e-4 * lambda, "alpha {alpha} n {n}: {worst:e} vs {lambda:e}");
        }
    }
}

#[test]
fn weighted_derivative_norm_is_eigenvalue() {
    for alpha in [0.3, 0.5, 1.0, 1.5] {
        let b = build_basis(alpha, 1.0, 12).unwrap();
        for n in 1..=12 {
            let v = b
                .quadrature_rule()
                .integrate(|x| x.powf(alpha) * b.eigenfunction_derivative(n, x).unwrap().powi(2));
            let lambda = b.eigenvalues()[n - 1];
            assert!((v - lambda).abs() <= 1e-6 * lambda, "alpha {alpha} n {n}: {v} vs {lambda}");
        }
    }
}

#[test]
fn continuous_in_alpha_at_zero() {
    let b = build_basis(1e-4, 1.0, 20).unwrap();
    for (n, l) in b.eigenvalues().iter().enumerate() {
        let classical = ((n + 1) as f64 * PI).powi(2);
        assert!((l - classical).abs() <= 1e-3 * classical, "n {}: {l}", n + 1);
    }
    let b = build_basis(0.0, 2.0, 20).unwrap();
    for (n, l) in b.eigenvalues().iter().enumerate() {
        let classical = ((n + 1) as f64 * PI / 2.0).powi(2);
        assert!((l - classical).abs() <= 1e-10 * classical);
    }
}

#[test]
fn continuous_across_regime_switch() {
    // the boundary condition at 0 changes at alpha = 1 but the spectrum does not jump
    let below = build_basis(1.0 - 1e-6, 1.0, 5).unwrap();
    let at = build_basis(1.0, 1.0, 5).unwrap();
    for (a, b) in below.eigenvalues().iter().zip(at.eigenvalues()) {
        assert!((a - b).abs() <= 1e-4 * b, "{a} vs {b}");
    }
}
