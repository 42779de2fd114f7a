use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::special::{exprel, exprel_prime, sinc};

/// Normalized indicator of the window `|y - 1/T| <= eps / T^(n+1)`.
///
/// The height is chosen so that the kernel has unit mass against
/// `dy / y^(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThickKernel {
    n: u32,
    t: f64,
    eps: f64,
    y_min: f64,
    y_max: f64,
    height: f64,
    /// `eps / T^n`, the relative half-width of the window.
    delta: f64,
    /// `atanh(delta)`, half the log-width of the window.
    half_log_width: f64,
}

impl ThickKernel {
    pub fn new(n: u32, t: f64, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("hyperbolic dimension n must be at least 1"));
        }
        if !(t.is_finite() && t >= 1.0) {
            return Err(domain(format!("T must be finite and >= 1, got {t}")));
        }
        if !(eps.is_finite() && eps > 0.0 && eps < 0.5) {
            return Err(domain(format!("eps must lie in (0, 1/2), got {eps}")));
        }
        let nf = n as f64;
        let delta = eps / t.powf(nf);
        let h = delta.atanh();
        let y_min = (1.0 - delta) / t;
        let y_max = (1.0 + delta) / t;
        // Mass of the window: T^n (1-delta)^(-n) 2h exprel(-2 n h).
        let mass = (nf * t.ln() - nf * (-delta).ln_1p()).exp()
            * 2.0
            * h
            * exprel(Complex64::new(-2.0 * nf * h, 0.0)).re;
        Ok(Self {
            n,
            t,
            eps,
            y_min,
            y_max,
            height: 1.0 / mass,
            delta,
            half_log_width: h,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn support(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Pointwise value. The window is closed.
    pub fn value(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain(format!("kernel evaluated at non-positive y = {y}")));
        }
        Ok(if y >= self.y_min && y <= self.y_max {
            self.height
        } else {
            0.0
        })
    }

    /// Moment relative to the window centre, `T^p * int psi y^p dy/y^(n+1)`.
    fn centred_moment(&self, p: Complex64) -> Complex64 {
        let n = self.n as f64;
        let h = self.half_log_width;
        (p * (-self.delta).ln_1p()).exp() * exprel(2.0 * h * (p - n))
            / exprel(Complex64::new(-2.0 * n * h, 0.0)).re
    }

    /// Derivative of [`Self::centred_moment`] in `p`.
    fn centred_moment_derivative(&self, p: Complex64) -> Complex64 {
        let n = self.n as f64;
        let h = self.half_log_width;
        let l1 = (-self.delta).ln_1p();
        let pre = (p * l1).exp();
        let base = exprel(Complex64::new(-2.0 * n * h, 0.0)).re;
        (pre * l1 * exprel(2.0 * h * (p - n)) + pre * 2.0 * h * exprel_prime(2.0 * h * (p - n)))
            / base
    }

    /// `int psi(y) y^p dy / y^(n+1)` in closed form.
    pub fn power_moment(&self, p: Complex64) -> Complex64 {
        (-p * self.t.ln()).exp() * self.centred_moment(p)
    }

    /// `int psi(y) y^p log(y) dy / y^(n+1)` in closed form.
    pub fn log_power_moment(&self, p: Complex64) -> Complex64 {
        let lt = self.t.ln();
        (-p * lt).exp() * (self.centred_moment_derivative(p) - lt * self.centred_moment(p))
    }

    /// `int psi(y) y^(n/2) sin(t log y) / t dy / y^(n+1)`, continuous at `t = 0`
    /// where it becomes the logarithmic moment of `y^(n/2)`.
    pub fn sine_moment(&self, t: f64) -> f64 {
        let half = self.n as f64 / 2.0;
        let lt = self.t.ln();
        let m = self.centred_moment(Complex64::new(half, t));
        let im_over_t = if t.abs() >= 1e-4 {
            m.im / t
        } else {
            self.centred_moment_derivative(Complex64::new(half, 0.0)).re
        };
        (-half * lt).exp() * ((t * lt).cos() * im_over_t - lt * sinc(t * lt) * m.re)
    }

    /// Power moments `(int psi y^s, int psi y^(n-s))` against `dy/y^(n+1)`.
    pub fn power_moments(&self, s: Complex64) -> (Complex64, Complex64) {
        let n = self.n as f64;
        (self.power_moment(s), self.power_moment(n - s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive;

    fn quad_moment(k: &ThickKernel, f: impl Fn(f64) -> f64) -> f64 {
        let (a, b) = k.support();
        let n = k.n() as i32;
        k.height() * adaptive(a, b, 1e-13, |y| f(y) / y.powi(n + 1)).unwrap()
    }

    #[test]
    fn unit_mass() {
        for &(n, t, eps) in &[(1, 1.0, 0.1), (2, 10.0, 0.01), (3, 50.0, 0.2), (4, 1e4, 1e-5)] {
            let k = ThickKernel::new(n, t, eps).unwrap();
            let m = k.power_moment(Complex64::new(0.0, 0.0));
            assert!((m.re - 1.0).abs() < 1e-13, "{n} {t} {eps}: {m}");
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let k = ThickKernel::new(2, 3.0, 0.3).unwrap();
        for &p in &[0.5, 1.0, 1.7, 2.0, -1.0] {
            let closed = k.power_moment(Complex64::new(p, 0.0)).re;
            let q = quad_moment(&k, |y| y.powf(p));
            assert!((closed - q).abs() < 1e-12 * q.abs(), "p = {p}");
            let closed_log = k.log_power_moment(Complex64::new(p, 0.0)).re;
            let q_log = quad_moment(&k, |y| y.powf(p) * y.ln());
            assert!((closed_log - q_log).abs() < 1e-12 * q_log.abs(), "p = {p}");
        }
    }

    #[test]
    fn sine_moment_matches_quadrature_and_limit() {
        let k = ThickKernel::new(3, 4.0, 0.4).unwrap();
        for &t in &[0.0, 1e-6, 1e-3, 0.5, 7.0] {
            let closed = k.sine_moment(t);
            let q = if t == 0.0 {
                quad_moment(&k, |y| y.powf(1.5) * y.ln())
            } else {
                quad_moment(&k, |y| y.powf(1.5) * (t * y.ln()).sin() / t)
            };
            assert!((closed - q).abs() < 1e-11 * q.abs(), "t = {t}: {closed} vs {q}");
        }
    }

    #[test]
    fn window_and_errors() {
        let k = ThickKernel::new(1, 2.0, 0.2).unwrap();
        let (a, b) = k.support();
        assert!((a - 0.45).abs() < 1e-15 && (b - 0.55).abs() < 1e-15);
        assert_eq!(k.value(a).unwrap(), k.height());
        assert_eq!(k.value(b).unwrap(), k.height());
        assert_eq!(k.value(0.6).unwrap(), 0.0);
        assert!(k.value(0.0).is_err());
        assert!(k.value(-1.0).is_err());
        assert!(ThickKernel::new(1, 0.5, 0.1).is_err());
        assert!(ThickKernel::new(1, 2.0, 0.0).is_err());
    }

    #[test]
    fn tiny_window_stays_accurate() {
        let k = ThickKernel::new(4, 1e4, 1e-5).unwrap();
        let s = Complex64::new(3.0, 0.0);
        let m = k.power_moment(s).re * 1e4f64.powi(3);
        assert!((m - 1.0).abs() < 1e-12);
    }
}
