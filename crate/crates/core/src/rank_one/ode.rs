use num_complex::Complex64;

use super::{SpectralKind, SpectralPoint};
use crate::error::{domain, Error, Result};
use crate::quadrature::{relative_change, GaussLegendre};

/// The radial operator `y^2 f'' - (n-1) y f' + s(n-s) f`, which annihilates
/// `y^s` and `y^(n-s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOde {
    point: SpectralPoint,
}

impl RadialOde {
    pub fn new(point: SpectralPoint) -> Self {
        Self { point }
    }

    pub fn point(&self) -> SpectralPoint {
        self.point
    }

    pub fn apply(&self, y: f64, f: f64, df: f64, d2f: f64) -> f64 {
        let n = self.point.n() as f64;
        y * y * d2f - (n - 1.0) * y * df + self.point.lambda() * f
    }
}

/// Residual `L f - g` at `y`, with centred differences of step `h_rel * y`.
pub fn radial_operator_residual(
    point: &SpectralPoint,
    f: impl Fn(f64) -> Result<f64>,
    g: impl Fn(f64) -> f64,
    y: f64,
    h_rel: f64,
) -> Result<f64> {
    let h = h_rel * y;
    let (fm, f0, fp) = (f(y - h)?, f(y)?, f(y + h)?);
    let df = (fp - fm) / (2.0 * h);
    let d2f = (fp - 2.0 * f0 + fm) / (h * h);
    Ok(RadialOde::new(*point).apply(y, f0, df, d2f) - g(y))
}

/// Particular solution of `L f = g` on `[y_lo, y_hi]` that vanishes with its
/// derivative at `y_hi`.
pub struct ParticularSolution<G> {
    point: SpectralPoint,
    g: G,
    y_lo: f64,
    y_hi: f64,
    panels: usize,
}

/// Builds the variation-of-parameters solution. The panel count of the fixed
/// composite rule is chosen once so that the full-interval integrals reach
/// relative accuracy `1e-10`; the same rule is then mapped onto `[y, y_hi]`,
/// which keeps the result smooth in `y`.
pub fn variation_of_parameters<G: Fn(f64) -> f64>(
    point: SpectralPoint,
    g: G,
    y_lo: f64,
    y_hi: f64,
) -> Result<ParticularSolution<G>> {
    if !(y_lo > 0.0 && y_hi > y_lo && y_hi.is_finite()) {
        return Err(domain(format!(
            "need 0 < y_lo < y_hi, got [{y_lo}, {y_hi}]"
        )));
    }
    let mut sol = ParticularSolution {
        point,
        g,
        y_lo,
        y_hi,
        panels: 1,
    };
    let mut prev = sol.coefficients(y_lo);
    let tol = 1e-10;
    loop {
        sol.panels *= 2;
        let next = sol.coefficients(y_lo);
        let change = relative_change(next.0, prev.0).max(relative_change(next.1, prev.1));
        prev = next;
        if change <= tol * 1e-3 {
            break;
        }
        if sol.panels >= 1 << 14 {
            if change <= tol {
                break;
            }
            return Err(Error::Quadrature {
                tol,
                achieved: change,
            });
        }
    }
    Ok(sol)
}

impl<G: Fn(f64) -> f64> ParticularSolution<G> {
    /// `(u(y), v(y))` with `f = y1 u + y2 v`.
    fn coefficients(&self, y: f64) -> (Complex64, Complex64) {
        let rule = GaussLegendre::cached(32);
        let n = self.point.n() as f64;
        let s = self.point.s();
        let log_case = self.point.kind() == SpectralKind::Tempered && s.im == 0.0;
        let zero = Complex64::new(0.0, 0.0);
        if log_case {
            let (mut u, mut v) = (0.0, 0.0);
            let h = (self.y_hi - y) / self.panels as f64;
            for p in 0..self.panels {
                let lo = y + h * p as f64;
                u += rule.integrate(lo, lo + h, |w| w.powf(-n / 2.0 - 1.0) * w.ln() * (self.g)(w));
                v -= rule.integrate(lo, lo + h, |w| w.powf(-n / 2.0 - 1.0) * (self.g)(w));
            }
            return (Complex64::new(u, 0.0), Complex64::new(v, 0.0));
        }
        let c = 1.0 / (n - 2.0 * s);
        let (mut u, mut v) = (zero, zero);
        let h = (self.y_hi - y) / self.panels as f64;
        for p in 0..self.panels {
            let lo = y + h * p as f64;
            u += rule.integrate(lo, lo + h, |w| {
                (-(s + 1.0) * w.ln()).exp() * (self.g)(w)
            });
            v += rule.integrate(lo, lo + h, |w| {
                ((s - n - 1.0) * w.ln()).exp() * (self.g)(w)
            });
        }
        (c * u, -c * v)
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        if !(y >= self.y_lo && y <= self.y_hi) {
            return Err(domain(format!(
                "y = {y} outside [{}, {}]",
                self.y_lo, self.y_hi
            )));
        }
        let n = self.point.n() as f64;
        let s = self.point.s();
        let (u, v) = self.coefficients(y);
        let ly = y.ln();
        let log_case = self.point.kind() == SpectralKind::Tempered && s.im == 0.0;
        let f = if log_case {
            let base = y.powf(n / 2.0);
            base * u + base * ly * v
        } else {
            (s * ly).exp() * u + ((n - s) * ly).exp() * v
        };
        Ok(f.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_solutions_are_annihilated() {
        let p = SpectralPoint::exceptional(3, 2.2).unwrap();
        let ode = RadialOde::new(p);
        let y: f64 = 1.7;
        let s = 2.2;
        let f = y.powf(s);
        let df = s * y.powf(s - 1.0);
        let d2f = s * (s - 1.0) * y.powf(s - 2.0);
        assert!(ode.apply(y, f, df, d2f).abs() < 1e-12);
        let m = 3.0 - s;
        let f = y.powf(m);
        let df = m * y.powf(m - 1.0);
        let d2f = m * (m - 1.0) * y.powf(m - 2.0);
        assert!(ode.apply(y, f, df, d2f).abs() < 1e-12);
    }

    #[test]
    fn particular_solution_vanishes_at_right_end() {
        let p = SpectralPoint::tempered(2, 1.5).unwrap();
        let sol = variation_of_parameters(p, |y: f64| y.sin(), 0.5, 3.0).unwrap();
        assert!(sol.eval(3.0).unwrap().abs() < 1e-15);
        assert!(sol.eval(4.0).is_err());
    }

    #[test]
    fn log_case_solves_equation() {
        let p = SpectralPoint::tempered(2, 0.0).unwrap();
        let g = |y: f64| (1.0 + y).ln();
        let sol = variation_of_parameters(p, g, 0.5, 4.0).unwrap();
        for &y in &[0.7, 1.3, 2.9] {
            let r = radial_operator_residual(&p, |x| sol.eval(x), g, y, 1e-4).unwrap();
            assert!(r.abs() < 1e-6, "y = {y}: {r}");
        }
    }
}
