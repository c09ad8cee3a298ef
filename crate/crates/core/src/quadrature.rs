//! Gauss-Legendre quadrature with runtime node generation.

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// from Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d) = legendre(n, x);
                dp = d;
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over `[a, b]` with the `n`-point rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_symmetric_and_weights_sum_to_two() {
        let (nodes, weights) = gauss_legendre(32);
        assert_eq!(nodes.len(), 32);
        for i in 0..16 {
            assert!((nodes[i] + nodes[31 - i]).abs() < 1e-14);
            assert!((weights[i] - weights[31 - i]).abs() < 1e-14);
        }
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn rule_is_exact_on_high_degree_polynomials() {
        // 32 points integrate degree 63 exactly.
        let exact = 2.0 / 63.0; // integral of x^62 over [-1, 1]
        let got = integrate(|x| x.powi(62), -1.0, 1.0, 32);
        assert!((got - exact).abs() <= 1e-14);
    }

    #[test]
    fn smooth_integrals_match_closed_forms() {
        let got = integrate(f64::sin, 0.0, std::f64::consts::PI, 32);
        assert!((got - 2.0).abs() < 1e-14);
        let a = integrate(|r| (r * r).exp(), 0.0, 1.0, 32);
        let b = integrate(|r| (r * r).exp(), 0.0, 1.0, 64);
        assert!((a - b).abs() < 1e-13);
    }
}
