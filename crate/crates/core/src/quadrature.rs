//! Gauss–Legendre rules, composite panels and adaptive bisection.

use std::ops::{Add, Mul, Sub};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be accumulated by the integrators.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
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

    /// Shared rule of order `n`, built once per process.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static RULES: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
        let mut map = RULES
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        map.entry(n)
            .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate<T: Integrand>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * *w;
        }
        acc * half
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite<T: Integrand>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: impl FnMut(f64) -> T,
    ) -> T {
        let h = (b - a) / panels as f64;
        let mut acc = T::zero();
        for p in 0..panels {
            let lo = a + h * p as f64;
            acc = acc + self.integrate(lo, lo + h, &mut f);
        }
        acc
    }
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
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection with a 32-point rule per panel.
///
/// A panel is accepted when its estimate agrees with the sum over its two
/// halves to within `tol` relative to the running magnitude of the integral.
pub fn adaptive<T: Integrand>(a: f64, b: f64, tol: f64, f: impl Fn(f64) -> T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let rule = GaussLegendre::cached(32);
    let whole = rule.integrate(a, b, &f);
    let scale = whole.magnitude().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut total = T::zero();
    let mut worst: f64 = 0.0;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        let refined = left + right;
        let diff = (refined - est).magnitude();
        let frac = (hi - lo).abs() / (b - a).abs();
        if diff <= tol * scale * frac.max(1e-3) || diff <= 1e-300 {
            total = total + refined;
        } else if depth >= 40 {
            worst = worst.max(diff / scale);
            total = total + refined;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::Quadrature {
            tol,
            achieved: worst,
        });
    }
    Ok(total)
}

/// Composite rule with panel doubling until two successive refinements each
/// change the estimate by at most `tol` relative.
pub fn doubling<T: Integrand>(
    a: f64,
    b: f64,
    initial_panels: usize,
    nodes: usize,
    tol: f64,
    max_panels: usize,
    f: impl Fn(f64) -> T,
) -> Result<T> {
    let rule = GaussLegendre::cached(nodes);
    let mut panels = initial_panels.max(1);
    let mut prev = rule.composite(a, b, panels, &f);
    let mut agreed = 0;
    let mut change = f64::INFINITY;
    while panels < max_panels {
        panels *= 2;
        let next = rule.composite(a, b, panels, &f);
        change = relative_change(next, prev);
        prev = next;
        if change <= tol {
            agreed += 1;
            if agreed >= 2 {
                return Ok(prev);
            }
        } else {
            agreed = 0;
        }
    }
    Err(Error::Quadrature {
        tol,
        achieved: change,
    })
}

pub(crate) fn relative_change<T: Integrand>(next: T, prev: T) -> f64 {
    let d = (next - prev).magnitude();
    let m = next.magnitude().max(prev.magnitude());
    if m == 0.0 {
        0.0
    } else {
        d / m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_are_sorted() {
        for n in [1, 2, 5, 8, 16, 32, 64] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}");
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::new(8);
        for k in 0..16 {
            let got: f64 = r.integrate(0.0, 1.0, |x| x.powi(k));
            assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let got: f64 = adaptive(0.0, 1.0, 1e-12, |x| 1.0 / (1e-4 + (x - 0.3).powi(2))).unwrap();
        let exact = ((0.7f64 / 1e-2).atan() + (0.3f64 / 1e-2).atan()) / 1e-2;
        assert!((got - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn adaptive_complex() {
        let got: Complex64 =
            adaptive(0.0, std::f64::consts::PI, 1e-12, |x| Complex64::new(0.0, x).exp()).unwrap();
        assert!((got - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn doubling_converges() {
        let got: f64 = doubling(0.0, 2.0, 2, 16, 1e-12, 1 << 12, |x| x.exp()).unwrap();
        assert!((got - (2f64.exp() - 1.0)).abs() < 1e-12);
    }
}
