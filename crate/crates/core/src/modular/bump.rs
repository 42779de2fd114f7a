use super::geometry::{reduce, UpperHalfPoint};
use crate::error::{domain, Result};

/// Axis-aligned support rectangle in reduced coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl SupportBox {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x_min && x < self.x_max && y > self.y_min && y < self.y_max
    }
}

/// `A phi((x - x0) / wx) phi((y - y0) / wy)` with
/// `phi(u) = exp(1 - 1 / (1 - u^2))` on `|u| < 1`, so the peak value is `A`.
///
/// The function lives on a box inside the standard fundamental domain and is
/// extended to the whole upper half plane through [`reduce`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTestFunction {
    center: UpperHalfPoint,
    half_widths: (f64, f64),
    amplitude: f64,
}

impl BumpTestFunction {
    pub fn new(center: UpperHalfPoint, wx: f64, wy: f64, amplitude: f64) -> Result<Self> {
        if !(wx > 0.0 && wy > 0.0 && wx.is_finite() && wy.is_finite()) {
            return Err(domain("bump half-widths must be positive"));
        }
        if !amplitude.is_finite() {
            return Err(domain("bump amplitude must be finite"));
        }
        let f = Self {
            center,
            half_widths: (wx, wy),
            amplitude,
        };
        let b = f.support_box();
        if b.y_min < 0.5 || b.y_max > 10.0 {
            return Err(domain(format!(
                "support y-range [{}, {}] leaves [0.5, 10]",
                b.y_min, b.y_max
            )));
        }
        let nearest_x = if b.x_min <= 0.0 && b.x_max >= 0.0 {
            0.0
        } else {
            b.x_min.abs().min(b.x_max.abs())
        };
        if b.x_min < -0.5 || b.x_max > 0.5 || nearest_x * nearest_x + b.y_min * b.y_min < 1.0 {
            return Err(domain(
                "support box must lie inside the standard fundamental domain",
            ));
        }
        Ok(f)
    }

    /// The laboratory default: centred at `1.75 i` with half-widths `(0.4, 0.6)`.
    pub fn default_bump() -> Self {
        Self::new(UpperHalfPoint { x: 0.0, y: 1.75 }, 0.4, 0.6, 1.0)
            .expect("default bump is valid")
    }

    pub fn center(&self) -> UpperHalfPoint {
        self.center
    }

    pub fn half_widths(&self) -> (f64, f64) {
        self.half_widths
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        Self { amplitude, ..*self }
    }

    pub fn support_box(&self) -> SupportBox {
        let (wx, wy) = self.half_widths;
        SupportBox {
            x_min: self.center.x - wx,
            x_max: self.center.x + wx,
            y_min: self.center.y - wy,
            y_max: self.center.y + wy,
        }
    }

    /// Value at a point given in reduced coordinates.
    pub fn value_reduced(&self, x: f64, y: f64) -> f64 {
        let (wx, wy) = self.half_widths;
        self.amplitude * profile((x - self.center.x) / wx) * profile((y - self.center.y) / wy)
    }

    /// Analytic `dF/dy` in reduced coordinates.
    pub fn dy_reduced(&self, x: f64, y: f64) -> f64 {
        let (wx, wy) = self.half_widths;
        self.amplitude * profile((x - self.center.x) / wx) * profile_derivative((y - self.center.y) / wy)
            / wy
    }

    /// Value of the automorphic extension at an arbitrary point.
    pub fn value(&self, z: &UpperHalfPoint) -> Result<f64> {
        let (w, _) = reduce(z)?;
        Ok(self.value_reduced(w.x, w.y))
    }
}

fn profile(u: f64) -> f64 {
    let q = 1.0 - u * u;
    if q <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / q).exp()
    }
}

fn profile_derivative(u: f64) -> f64 {
    let q = 1.0 - u * u;
    if q <= 0.0 {
        0.0
    } else {
        profile(u) * (-2.0 * u / (q * q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_and_support() {
        let f = BumpTestFunction::default_bump();
        assert_eq!(f.value_reduced(0.0, 1.75), 1.0);
        assert_eq!(f.value_reduced(0.4, 1.75), 0.0);
        assert_eq!(f.value_reduced(0.0, 2.35), 0.0);
        assert!(f.value_reduced(0.1, 2.0) > 0.0);
    }

    #[test]
    fn derivative_matches_difference() {
        let f = BumpTestFunction::default_bump();
        for &(x, y) in &[(0.1, 1.5), (-0.2, 2.1), (0.0, 1.75)] {
            let h = 1e-6;
            let fd = (f.value_reduced(x, y + h) - f.value_reduced(x, y - h)) / (2.0 * h);
            assert!((fd - f.dy_reduced(x, y)).abs() < 1e-8);
        }
    }

    #[test]
    fn automorphic_extension() {
        let f = BumpTestFunction::default_bump();
        let z = UpperHalfPoint { x: 0.1, y: 2.0 };
        let shifted = UpperHalfPoint { x: 3.1, y: 2.0 };
        assert!((f.value(&z).unwrap() - f.value(&shifted).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn box_validation() {
        let c = UpperHalfPoint { x: 0.0, y: 1.2 };
        assert!(BumpTestFunction::new(c, 0.2, 0.3, 1.0).is_err());
        let c = UpperHalfPoint { x: 0.42, y: 1.0 };
        assert!(BumpTestFunction::new(c, 0.07, 0.04, 1.0).is_ok());
        let c = UpperHalfPoint { x: 0.0, y: 9.8 };
        assert!(BumpTestFunction::new(c, 0.1, 0.5, 1.0).is_err());
    }
}
