//! Gauss-Legendre rules and an order-doubling integrator.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of P_n by Newton iteration from the Chebyshev-like guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub const MIN_ORDER: usize = 16;
pub const MAX_ORDER: usize = 1024;
const LEVELS: usize = 7; // 16 .. 1024

fn cached_rule(level: usize) -> &'static GaussLegendre {
    static RULES: [OnceLock<GaussLegendre>; LEVELS] = [const { OnceLock::new() }; LEVELS];
    RULES[level].get_or_init(|| GaussLegendre::new(MIN_ORDER << level))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// `|I_2n - I_n|` of the last two orders.
    pub error_estimate: f64,
    pub order: usize,
}

impl Quadrature {
    pub fn converged(&self, tol: f64) -> bool {
        self.error_estimate <= tol
    }
}

/// Doubles the Gauss-Legendre order from 16 until two successive values
/// differ by at most `tol`, or 1024 is reached.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    let mut prev = cached_rule(0).integrate(&f, a, b);
    let mut result = Quadrature {
        value: prev,
        error_estimate: f64::INFINITY,
        order: MIN_ORDER,
    };
    for level in 1..LEVELS {
        let rule = cached_rule(level);
        let value = rule.integrate(&f, a, b);
        result = Quadrature {
            value,
            error_estimate: (value - prev).abs(),
            order: rule.order(),
        };
        if result.converged(tol) {
            break;
        }
        prev = value;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_orders_match_known_nodes() {
        let g = GaussLegendre::new(2);
        assert_relative_eq!(g.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(g.weights[0], 1.0, max_relative = 1e-14);

        let g = GaussLegendre::new(3);
        assert_relative_eq!(g.nodes[2], (0.6f64).sqrt(), max_relative = 1e-15);
        assert_eq!(g.nodes[1], 0.0);
        assert_relative_eq!(g.weights[1], 8.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(g.weights[0], 5.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 5, 16, 64, 1024] {
            let g = GaussLegendre::new(n);
            assert_relative_eq!(g.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-13);
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(8);
        // degree 15 is the highest integrated exactly
        let v = g.integrate(|x| x.powi(14) + 3.0 * x.powi(15), -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 15.0, max_relative = 1e-13);
        let v = g.integrate(|x| x * x, 0.0, 3.0);
        assert_relative_eq!(v, 9.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_reaches_tolerance() {
        let q = integrate_adaptive(|x| (1.0 + x * x).recip(), 0.0, 1.0, 1e-12);
        assert!(q.converged(1e-12));
        assert_relative_eq!(q.value, PI / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_reports_unconverged() {
        // sqrt singularity at the endpoint defeats plain Gauss-Legendre
        let q = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14);
        assert_eq!(q.order, MAX_ORDER);
        assert!(!q.converged(1e-14));
    }
}
