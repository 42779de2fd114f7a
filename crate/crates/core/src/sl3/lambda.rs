use num_complex::Complex64;

use crate::diffop::{DiffOperator, Term};
use crate::error::{domain, Result};

/// Spectral coordinates `(nu_1, nu_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuPair {
    pub nu1: Complex64,
    pub nu2: Complex64,
}

impl NuPair {
    pub fn new(nu1: Complex64, nu2: Complex64) -> Self {
        Self { nu1, nu2 }
    }

    pub fn real(nu1: f64, nu2: f64) -> Self {
        Self::new(Complex64::new(nu1, 0.0), Complex64::new(nu2, 0.0))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.nu2, self.nu1)
    }

    pub fn distance(&self, other: &NuPair) -> f64 {
        (self.nu1 - other.nu1).norm().hypot((self.nu2 - other.nu2).norm())
    }

    pub fn is_tempered(&self) -> bool {
        (self.nu1.re - 1.0 / 3.0).abs() < 1e-12 && (self.nu2.re - 1.0 / 3.0).abs() < 1e-12
    }
}

/// Exponents of `y_1` and `y_2` in the power function `y_1^s y_2^r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SRPair {
    pub s: Complex64,
    pub r: Complex64,
}

impl SRPair {
    pub fn new(s: Complex64, r: Complex64) -> Self {
        Self { s, r }
    }

    pub fn real(s: f64, r: f64) -> Self {
        Self::new(Complex64::new(s, 0.0), Complex64::new(r, 0.0))
    }
}

/// Eigenvalues of the two Casimir operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl LambdaPair {
    pub fn new(lambda1: Complex64, lambda2: Complex64) -> Self {
        Self { lambda1, lambda2 }
    }

    pub fn real(lambda1: f64, lambda2: f64) -> Self {
        Self::new(Complex64::new(lambda1, 0.0), Complex64::new(lambda2, 0.0))
    }

    pub fn distance(&self, other: &LambdaPair) -> f64 {
        (self.lambda1 - other.lambda1)
            .norm()
            .max((self.lambda2 - other.lambda2).norm())
    }
}

pub fn sr_from_nu(nu: &NuPair) -> SRPair {
    SRPair::new(nu.nu1 + 2.0 * nu.nu2, 2.0 * nu.nu1 + nu.nu2)
}

pub fn nu_from_sr(sr: &SRPair) -> NuPair {
    NuPair::new((2.0 * sr.r - sr.s) / 3.0, (2.0 * sr.s - sr.r) / 3.0)
}

/// The polynomial relations in `nu`.
pub fn lambda_from_nu(nu: &NuPair) -> LambdaPair {
    let (a, b) = (nu.nu1, nu.nu2);
    let l1 = -3.0 * (a * a + b * b - a - b + a * b);
    let l2 = (b - a) * (2.0 * a * a + b * (-3.0 + 2.0 * b) + a * (-3.0 + 5.0 * b));
    LambdaPair::new(l1, l2)
}

/// The relations in the exponents `(s, r)`.
pub fn lambda_from_sr(sr: &SRPair) -> LambdaPair {
    let (s, r) = (sr.s, sr.r);
    let l1 = s * r - s * (s - 1.0) - r * (r - 1.0);
    let l2 = s * r * (s - r) + s * (s - 1.0) + r * (r - 1.0);
    LambdaPair::new(l1, l2)
}

/// Eigenvalues obtained by applying the two Casimir operators to
/// `y_1^s y_2^r`, under the sign convention fixed by [`CASIMIR_SIGN`].
pub fn lambda_monomial_oracle(sr: &SRPair) -> LambdaPair {
    LambdaPair::new(
        casimir_apply_monomial(CasimirIndex::First, sr),
        casimir_apply_monomial(CasimirIndex::Second, sr),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirIndex {
    First,
    Second,
}

impl TryFrom<u32> for CasimirIndex {
    type Error = crate::error::Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(domain(format!("Casimir index must be 1 or 2, got {v}"))),
        }
    }
}

/// Global sign relating the displayed operators to the eigenvalues: the
/// tempered base point `y_1 y_2` must have first eigenvalue `+1`, and the
/// displayed first operator sends it to `-y_1 y_2`.
pub const CASIMIR_SIGN: f64 = -1.0;

/// The `y`-derivative part of the displayed operators. The `x`-derivative
/// terms vanish on functions of `y` alone.
pub fn casimir_operator(index: CasimirIndex) -> DiffOperator {
    let terms = match index {
        CasimirIndex::First => vec![
            Term::new(1.0, &[2, 0], &[2, 0]),
            Term::new(1.0, &[0, 2], &[0, 2]),
            Term::new(-1.0, &[1, 1], &[1, 1]),
        ],
        CasimirIndex::Second => vec![
            Term::new(-1.0, &[2, 1], &[2, 1]),
            Term::new(1.0, &[1, 2], &[1, 2]),
            Term::new(-1.0, &[0, 2], &[0, 2]),
            Term::new(1.0, &[2, 0], &[2, 0]),
        ],
    };
    DiffOperator::new(2, terms).expect("two-variable terms")
}

/// Eigenvalue of the power function `y_1^s y_2^r`.
pub fn casimir_apply_monomial(index: CasimirIndex, sr: &SRPair) -> Complex64 {
    CASIMIR_SIGN
        * casimir_operator(index)
            .monomial_scalar(&[sr.s, sr.r])
            .expect("Euler operator")
}

/// `(D y^(s,r))(y) / y^(s,r)` at a specific point, with the sign convention.
pub fn casimir_monomial_ratio(index: CasimirIndex, sr: &SRPair, y: (f64, f64)) -> Result<Complex64> {
    Ok(CASIMIR_SIGN * casimir_operator(index).ratio_on_monomial(&[sr.s, sr.r], &[y.0, y.1])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn base_points() {
        let l = lambda_from_nu(&NuPair::real(1.0 / 3.0, 1.0 / 3.0));
        assert!(close(l.lambda1, 1.0) && close(l.lambda2, 0.0));
        let l = lambda_from_nu(&NuPair::real(0.0, 0.0));
        assert!(close(l.lambda1, 0.0) && close(l.lambda2, 0.0));
        let l = lambda_from_sr(&SRPair::real(1.0, 1.0));
        assert!(close(l.lambda1, 1.0) && close(l.lambda2, 0.0));
    }

    #[test]
    fn calibration() {
        let base = SRPair::real(1.0, 1.0);
        assert!(close(casimir_apply_monomial(CasimirIndex::First, &base), 1.0));
        assert!(close(casimir_apply_monomial(CasimirIndex::First, &SRPair::real(0.0, 0.0)), 0.0));
    }

    #[test]
    fn sr_round_trip() {
        let nu = NuPair::new(Complex64::new(0.2, 0.1), Complex64::new(-0.4, 2.0));
        let back = nu_from_sr(&sr_from_nu(&nu));
        assert!(back.distance(&nu) < 1e-15);
        let sr = sr_from_nu(&nu);
        assert!((sr.s + sr.r - 3.0 * (nu.nu1 + nu.nu2)).norm() < 1e-15);
    }

    #[test]
    fn second_eigenvalue_factorises() {
        // (s - r)(s - 1)(r - 1)
        let sr = SRPair::new(Complex64::new(0.7, 0.2), Complex64::new(-1.1, 0.5));
        let direct = (sr.s - sr.r) * (sr.s - 1.0) * (sr.r - 1.0);
        assert!((casimir_apply_monomial(CasimirIndex::Second, &sr) - direct).norm() < 1e-13);
    }

    #[test]
    fn index_parsing() {
        assert_eq!(CasimirIndex::try_from(2).unwrap(), CasimirIndex::Second);
        assert!(CasimirIndex::try_from(3).is_err());
    }
}
