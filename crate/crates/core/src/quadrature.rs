//! Composite quadrature rules.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;


/// Composite Simpson on equally spaced samples `values[i] = g(a + i h)`.
/// An odd number of intervals closes with the 3/8 rule; a single interval
/// falls back to the trapezoid.
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    let intervals = values.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let (even_part, tail) = if intervals % 2 == 0 { (intervals, 0) } else { (intervals - 3, 3) };
            let mut sum = 0.0;
            if even_part > 0 {
                let mut s = values[0] + values[even_part];
                for (i, v) in values.iter().enumerate().take(even_part).skip(1) {
                    s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
                }
                sum += s * h / 3.0;
            }
            if tail == 3 {
                let v = &values[even_part..];
                sum += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            sum
        }
    }
}

/// Simpson value together with a Richardson error estimate from the rule on
/// every other sample.
pub fn simpson_with_estimate(values: &[f64], h: f64) -> (f64, f64) {
    let full = simpson_uniform(values, h);
    if values.len() < 5 {
        return (full, f64::INFINITY);
    }
    // keep an even interval count so both grids cover the same range
    let span = if (values.len() - 1) % 2 == 0 { values.len() } else { values.len() - 1 };
    let fine = simpson_uniform(&values[..span], h);
    let coarse: Vec<f64> = values[..span].iter().step_by(2).copied().collect();
    let coarse = simpson_uniform(&coarse, 2.0 * h);
    (full, (fine - coarse).abs() / 15.0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let n = order as f64;
        for i in 0..order {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]` split into `panels` equal pieces.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, panels: usize) -> f64 {
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            let s: f64 =
                self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + 0.5 * width * x)).sum();
            total += 0.5 * width * s;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [2usize, 3, 4, 7, 10] {
            let h = 2.0 / n as f64;
            let values: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!((simpson_uniform(&values, h) - 4.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn estimate_brackets_true_error() {
        let n = 64;
        let h = PI / n as f64;
        let values: Vec<f64> = (0..=n).map(|i| (i as f64 * h).sin()).collect();
        let (value, estimate) = simpson_with_estimate(&values, h);
        let error = (value - 2.0).abs();
        assert!(error <= 2.0 * estimate && estimate <= 20.0 * error);
    }

    #[test]
    fn gauss_legendre_polynomials_and_smooth() {
        let gl = GaussLegendre::new(10);
        // ten nodes integrate degree 19 exactly
        assert!((gl.integrate(|x| x.powi(18), -1.0, 1.0, 1) - 2.0 / 19.0).abs() < 1e-14);
        assert!((gl.integrate(|x| x.powi(19), 0.0, 1.0, 1) - 0.05).abs() < 1e-14);
        assert!((gl.integrate(f64::exp, 0.0, 3.0, 4) - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }
}
