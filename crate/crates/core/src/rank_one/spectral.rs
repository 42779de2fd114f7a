use num_complex::Complex64;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    /// Real `s` in `(n/2, n]`.
    Exceptional,
    /// `s = n/2 + i t` with real `t`.
    Tempered,
}

/// Spectral parameter `s` attached to the hyperbolic dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    n: u32,
    s: Complex64,
    kind: SpectralKind,
}

impl SpectralPoint {
    pub fn exceptional(n: u32, s: f64) -> Result<Self> {
        check_n(n)?;
        let half = n as f64 / 2.0;
        if !(s.is_finite() && s > half && s <= n as f64) {
            return Err(domain(format!(
                "exceptional parameter must lie in ({half}, {n}], got {s}"
            )));
        }
        Ok(Self {
            n,
            s: Complex64::new(s, 0.0),
            kind: SpectralKind::Exceptional,
        })
    }

    pub fn tempered(n: u32, t: f64) -> Result<Self> {
        check_n(n)?;
        if !t.is_finite() {
            return Err(domain("tempered parameter t must be finite"));
        }
        Ok(Self {
            n,
            s: Complex64::new(n as f64 / 2.0, t),
            kind: SpectralKind::Tempered,
        })
    }

    /// Classifies an arbitrary complex `s`.
    pub fn new(n: u32, s: Complex64) -> Result<Self> {
        check_n(n)?;
        let half = n as f64 / 2.0;
        if (s.re - half).abs() <= 1e-12 * half.max(1.0) {
            Self::tempered(n, s.im)
        } else if s.im == 0.0 {
            Self::exceptional(n, s.re)
        } else {
            Err(domain(format!(
                "s = {s} is neither on the critical line nor real"
            )))
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    /// Imaginary part on the critical line, `None` for exceptional points.
    pub fn t(&self) -> Option<f64> {
        match self.kind {
            SpectralKind::Tempered => Some(self.s.im),
            SpectralKind::Exceptional => None,
        }
    }

    /// Laplace eigenvalue `s (n - s)`.
    pub fn lambda(&self) -> f64 {
        let n = self.n as f64;
        (self.s * (n - self.s)).re
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(domain("hyperbolic dimension n must be at least 1"))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_on_critical_line() {
        let p = SpectralPoint::tempered(3, 2.0).unwrap();
        assert!((p.lambda() - (2.25 + 4.0)).abs() < 1e-14);
        assert_eq!(p.kind(), SpectralKind::Tempered);
    }

    #[test]
    fn classification() {
        assert_eq!(
            SpectralPoint::new(2, Complex64::new(1.5, 0.0)).unwrap().kind(),
            SpectralKind::Exceptional
        );
        assert_eq!(
            SpectralPoint::new(2, Complex64::new(1.0, 3.0)).unwrap().t(),
            Some(3.0)
        );
        assert!(SpectralPoint::new(2, Complex64::new(1.5, 1.0)).is_err());
        assert!(SpectralPoint::exceptional(2, 0.5).is_err());
        assert!(SpectralPoint::exceptional(2, 2.5).is_err());
        assert!(SpectralPoint::tempered(0, 1.0).is_err());
    }
}
