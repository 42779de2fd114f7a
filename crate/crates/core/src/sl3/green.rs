use crate::error::{domain, Error, Result};

/// Exponent `kappa` of the radial Green kernel: the root of
/// `kappa (kappa - 1) = 4 lambda_1` with real part at least `1/2`.
pub fn green_kernel_exponent(lambda1: f64) -> Result<f64> {
    let disc = 1.0 + 16.0 * lambda1;
    if disc < 0.0 {
        return Err(domain(format!(
            "lambda1 = {lambda1} < -1/16 gives a complex exponent"
        )));
    }
    Ok(0.5 * (1.0 + disc.sqrt()))
}

/// `|xi - y|^kappa`.
pub fn green_kernel(lambda1: f64, y: (f64, f64), xi: (f64, f64)) -> Result<f64> {
    let r = (xi.0 - y.0).hypot(xi.1 - y.1);
    if r == 0.0 {
        return Err(Error::NumericDegeneracy(
            "Green kernel is singular at y = xi".into(),
        ));
    }
    Ok(r.powf(green_kernel_exponent(lambda1)?))
}

/// Residual of `(pi/2) r^2 h'' - 2 pi lambda_1 h` for `h = r^kappa`, relative
/// to `2 pi lambda_1 h` (or to `h` when `lambda_1 = 0`).
pub fn green_radial_residual(lambda1: f64, r: f64) -> Result<f64> {
    let k = green_kernel_exponent(lambda1)?;
    let h = r.powf(k);
    let h2 = k * (k - 1.0) * r.powf(k - 2.0);
    let lhs = std::f64::consts::FRAC_PI_2 * r * r * h2;
    let rhs = 2.0 * std::f64::consts::PI * lambda1 * h;
    Ok((lhs - rhs).abs() / rhs.abs().max(h.abs()))
}

/// Balanced thickening for `SL(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl3Epsilon {
    pub eps: f64,
    /// `eps |F|_{1,inf}`.
    pub thickening_term: f64,
    /// `eps^-1 (T_1 T_2)^-1 log T_1 log T_2 |F|_Gamma`.
    pub spectral_term: f64,
    pub asymptotic: bool,
}

pub fn epsilon_optimizer_sl3(t1: f64, t2: f64, norm_gamma: f64, norm_1inf: f64) -> Result<Sl3Epsilon> {
    if !(t1.ln() >= 1.0 - 1e-15 && t2.ln() >= 1.0 - 1e-15 && t1.is_finite() && t2.is_finite()) {
        return Err(domain(format!("need log T1, log T2 >= 1, got ({t1}, {t2})")));
    }
    if !(norm_gamma > 0.0 && norm_1inf > 0.0) {
        return Err(domain("norms must be positive"));
    }
    let logs = t1.ln() * t2.ln();
    let eps = (logs * norm_gamma / (t1 * t2 * norm_1inf)).sqrt();
    Ok(Sl3Epsilon {
        eps,
        thickening_term: eps * norm_1inf,
        spectral_term: logs * norm_gamma / (eps * t1 * t2),
        asymptotic: eps < 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_roots() {
        assert_eq!(green_kernel_exponent(0.0).unwrap(), 1.0);
        assert_eq!(green_kernel_exponent(0.5).unwrap(), 2.0);
        assert!(green_kernel_exponent(-0.1).is_err());
    }

    #[test]
    fn kernel_values() {
        assert!((green_kernel(0.5, (0.0, 0.0), (3.0, 4.0)).unwrap() - 25.0).abs() < 1e-12);
        assert!(green_kernel(0.5, (1.0, 2.0), (1.0, 2.0)).is_err());
    }

    #[test]
    fn radial_equation() {
        for &l in &[0.0, 0.3, 1.0, 7.5] {
            for &r in &[0.1, 1.0, 3.7] {
                assert!(green_radial_residual(l, r).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn logs_equal_one() {
        let e = std::f64::consts::E;
        let c = epsilon_optimizer_sl3(e, e, 1.0, 1.0).unwrap();
        assert!((c.eps - 1.0 / e).abs() < 1e-15);
    }
}
