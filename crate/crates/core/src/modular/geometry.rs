use std::ops::Mul;

use crate::error::{domain, Error, Result};

pub const REDUCTION_CAP: usize = 10_000;

/// A point `x + i y` of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite() && x.is_finite()) {
            return Err(domain(format!("({x}, {y}) is not in the upper half plane")));
        }
        Ok(Self { x, y })
    }

    pub fn abs2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Whether the point lies in the closed standard fundamental domain.
    pub fn is_reduced(&self) -> bool {
        self.x.abs() <= 0.5 && self.abs2() >= 1.0
    }
}

/// An element of `SL(2, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub const IDENTITY: Self = Self {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// `z -> -1/z`.
    pub const INVERSION: Self = Self {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a.checked_mul(d).zip(b.checked_mul(c)).map(|(p, q)| p - q) != Some(1) {
            return Err(domain(format!("det [[{a}, {b}], [{c}, {d}]] != 1")));
        }
        Ok(Self { a, b, c, d })
    }

    /// `z -> z + k`.
    pub fn translation(k: i64) -> Self {
        Self {
            a: 1,
            b: k,
            c: 0,
            d: 1,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

impl Mul for UnimodularMatrix {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// `(a z + b) / (c z + d)`.
pub fn moebius(g: &UnimodularMatrix, z: &UpperHalfPoint) -> UpperHalfPoint {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let re = c * z.x + d;
    let im = c * z.y;
    let den = re * re + im * im;
    UpperHalfPoint {
        x: ((a * z.x + b) * re + a * c * z.y * z.y) / den,
        y: z.y / den,
    }
}

/// Maps `z` into the closed standard fundamental domain and returns the
/// matrix `g` with `moebius(g, z)` equal to the reduced point.
pub fn reduce(z: &UpperHalfPoint) -> Result<(UpperHalfPoint, UnimodularMatrix)> {
    let mut g = UnimodularMatrix::IDENTITY;
    let mut w = *z;
    for _ in 0..REDUCTION_CAP {
        let k = w.x.round();
        if k != 0.0 {
            g = UnimodularMatrix::translation(-(k as i64)) * g;
            w = moebius(&g, z);
        }
        if w.abs2() < 1.0 {
            g = UnimodularMatrix::INVERSION * g;
            w = moebius(&g, z);
        } else if w.x.abs() <= 0.5 {
            return Ok((w, g));
        }
    }
    Err(Error::NumericDegeneracy(format!(
        "reduction of ({}, {}) did not terminate within {REDUCTION_CAP} steps",
        z.x, z.y
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_actions() {
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert_eq!(moebius(&UnimodularMatrix::IDENTITY, &i), i);
        let w = moebius(&UnimodularMatrix::INVERSION, &i);
        assert!((w.x).abs() < 1e-16 && (w.y - 1.0).abs() < 1e-16);
        let w = moebius(&UnimodularMatrix::translation(1), &i);
        assert_eq!((w.x, w.y), (1.0, 1.0));
    }

    #[test]
    fn reduce_fixed_points() {
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert_eq!(reduce(&i).unwrap(), (i, UnimodularMatrix::IDENTITY));
        let z = UpperHalfPoint::new(0.3, 2.0).unwrap();
        assert_eq!(reduce(&z).unwrap().0, z);
    }

    #[test]
    fn reduce_round_trip() {
        let z = UpperHalfPoint::new(0.7, 0.1).unwrap();
        let (w, g) = reduce(&z).unwrap();
        assert!(w.is_reduced());
        let back = moebius(&g, &z);
        assert!((back.x - w.x).abs() < 1e-13 && (back.y - w.y).abs() < 1e-13);
        assert_eq!(g.a * g.d - g.b * g.c, 1);
    }

    #[test]
    fn determinant_checked() {
        assert!(UnimodularMatrix::new(1, 1, 1, 1).is_err());
        assert!(UnimodularMatrix::new(2, 1, 1, 1).is_ok());
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
    }
}
