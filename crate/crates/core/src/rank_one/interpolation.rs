use num_complex::Complex64;

use super::{SpectralKind, SpectralPoint, ThickKernel};
use crate::error::{domain, Error, Result};

pub const DEFAULT_NODE_B: f64 = 2.0;

/// Moments of the two homogeneous radial solutions against a thickened kernel.
///
/// Off the critical line the solutions are `y^s` and `y^(n-s)`. On the
/// critical line `s = n/2 + it` the second solution is
/// `y^(n/2) sin(t log y) / t`, which tends to `y^(n/2) log y` as `t -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    pub alpha: Complex64,
    pub beta: Complex64,
}

pub fn alpha_beta(kernel: &ThickKernel, point: &SpectralPoint) -> Result<AlphaBeta> {
    if kernel.n() != point.n() {
        return Err(domain(format!(
            "kernel dimension {} differs from spectral dimension {}",
            kernel.n(),
            point.n()
        )));
    }
    let s = point.s();
    let alpha = kernel.power_moment(s);
    let beta = match point.kind() {
        SpectralKind::Exceptional => kernel.power_moment(point.n() as f64 - s),
        SpectralKind::Tempered => Complex64::new(kernel.sine_moment(s.im), 0.0),
    };
    Ok(AlphaBeta { alpha, beta })
}

/// Weights with `a(T) = K a(1) + L a(b)` for every homogeneous radial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationPair {
    pub node_b: f64,
    pub k: Complex64,
    pub l: Complex64,
}

pub fn interpolation_weights(
    point: &SpectralPoint,
    t: f64,
    b: f64,
    eps: f64,
) -> Result<InterpolationPair> {
    if !(b.is_finite() && b > 1.0) {
        return Err(domain(format!("second node b must be finite and > 1, got {b}")));
    }
    let n = point.n();
    let at = |x: f64| -> Result<AlphaBeta> { alpha_beta(&ThickKernel::new(n, x, eps)?, point) };
    let one = at(1.0)?;
    let nb = at(b)?;
    let nt = at(t)?;
    let d = one.alpha * nb.beta - nb.alpha * one.beta;
    let scale = one.alpha.norm().hypot(one.beta.norm()) * nb.alpha.norm().hypot(nb.beta.norm());
    if d.norm() <= 1e-14 * scale || d.norm() == 0.0 {
        return Err(Error::DegenerateNode {
            s: point.s(),
            b,
            denominator: d.norm(),
        });
    }
    let k = (nb.beta * nt.alpha - nb.alpha * nt.beta) / d;
    let l = (one.alpha * nt.beta - one.beta * nt.alpha) / d;
    Ok(InterpolationPair { node_b: b, k, l })
}

/// `|f(T) - K f(1) - L f(b)| / (|A| + |B|)` for `f = A alpha + B beta`.
pub fn homogeneous_interpolation_residual(
    a: Complex64,
    b_coef: Complex64,
    point: &SpectralPoint,
    t: f64,
    b: f64,
    eps: f64,
) -> Result<f64> {
    let pair = interpolation_weights(point, t, b, eps)?;
    let scale = a.norm() + b_coef.norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let n = point.n();
    let value = |x: f64| -> Result<Complex64> {
        let ab = alpha_beta(&ThickKernel::new(n, x, eps)?, point)?;
        Ok(a * ab.alpha + b_coef * ab.beta)
    };
    let r = value(t)? - pair.k * value(1.0)? - pair.l * value(b)?;
    Ok(r.norm() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reproduce_both_basis_moments() {
        let p = SpectralPoint::exceptional(2, 1.6).unwrap();
        let w = interpolation_weights(&p, 30.0, 2.0, 0.1).unwrap();
        let ab = |t: f64| alpha_beta(&ThickKernel::new(2, t, 0.1).unwrap(), &p).unwrap();
        let (a1, ab_, at) = (ab(1.0), ab(2.0), ab(30.0));
        assert!((at.alpha - w.k * a1.alpha - w.l * ab_.alpha).norm() < 1e-14);
        assert!((at.beta - w.k * a1.beta - w.l * ab_.beta).norm() < 1e-14);
    }

    #[test]
    fn zero_coefficients_give_zero_residual() {
        let p = SpectralPoint::tempered(1, 2.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(homogeneous_interpolation_residual(z, z, &p, 5.0, 2.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn bad_node_rejected() {
        let p = SpectralPoint::tempered(1, 2.0).unwrap();
        assert!(interpolation_weights(&p, 5.0, 1.0, 0.1).is_err());
        assert!(interpolation_weights(&p, 5.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn resonant_node_is_degenerate() {
        // t log b = pi makes sin(t log y) vanish at both nodes.
        let t = std::f64::consts::PI / 2f64.ln();
        let p = SpectralPoint::tempered(1, t).unwrap();
        let eps = 1e-9;
        match interpolation_weights(&p, 5.0, 2.0, eps) {
            Err(Error::DegenerateNode { b, .. }) => assert_eq!(b, 2.0),
            other => panic!("expected degenerate node, got {other:?}"),
        }
    }
}
