#![allow(dead_code)]

use std::io::Write;

/// Writes a verdict line straight to stdout so it survives output capture.
pub fn report(criterion: u32, pass: bool, text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "[{}] criterion {criterion:>2}: {text}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate(a: f64, b: f64, panels: usize, rule: &[(f64, f64)], f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let (mid, half) = (lo + h / 2.0, h / 2.0);
        acc += rule.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half;
    }
    acc
}
