use num_rational::Rational64;

use crate::error::{domain, Result};

/// Exponent bookkeeping for the rank-one effective rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentBudget {
    pub n: u32,
    pub delta: f64,
    pub s1: f64,
    /// `n^2 - 3n + 10`.
    pub p: f64,
    pub eta_cont: f64,
    pub eta_s1: f64,
    /// Growth exponent of the smoothed kernel norm, `(n^2 - 3n + 6) / 4`.
    pub kernel_norm_exp: f64,
    /// Power of `T` in the balanced thickening, `-4(delta - n/2) / P`.
    pub eps_exponent: f64,
}

/// [`ExponentBudget`] in exact rational arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactExponentBudget {
    pub n: u32,
    pub delta: Rational64,
    pub s1: Rational64,
    pub p: Rational64,
    pub eta_cont: Rational64,
    pub eta_s1: Rational64,
    pub kernel_norm_exp: Rational64,
    pub eps_exponent: Rational64,
}

pub fn exponent_budget(n: u32, delta: f64, s1: f64) -> Result<ExponentBudget> {
    let half = n as f64 / 2.0;
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if !(delta > half && delta <= n as f64) {
        return Err(domain(format!("delta = {delta} outside ({half}, {n}]")));
    }
    if !(s1 >= half && s1 < delta) {
        return Err(domain(format!("s1 = {s1} outside [{half}, {delta})")));
    }
    let nf = n as f64;
    let p = nf * nf - 3.0 * nf + 10.0;
    Ok(ExponentBudget {
        n,
        delta,
        s1,
        p,
        eta_cont: 4.0 * (delta - half) / p,
        eta_s1: 4.0 * (delta - s1) / p,
        kernel_norm_exp: (nf * nf - 3.0 * nf + 6.0) / 4.0,
        eps_exponent: -4.0 * (delta - half) / p,
    })
}

pub fn exponent_budget_exact(
    n: u32,
    delta: Rational64,
    s1: Rational64,
) -> Result<ExactExponentBudget> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    let ni = n as i64;
    let half = Rational64::new(ni, 2);
    if !(delta > half && delta <= Rational64::from_integer(ni)) {
        return Err(domain(format!("delta = {delta} outside ({half}, {n}]")));
    }
    if !(s1 >= half && s1 < delta) {
        return Err(domain(format!("s1 = {s1} outside [{half}, {delta})")));
    }
    let p = Rational64::from_integer(ni * ni - 3 * ni + 10);
    let four = Rational64::from_integer(4);
    Ok(ExactExponentBudget {
        n,
        delta,
        s1,
        p,
        eta_cont: four * (delta - half) / p,
        eta_s1: four * (delta - s1) / p,
        kernel_norm_exp: Rational64::new(ni * ni - 3 * ni + 6, 4),
        eps_exponent: -four * (delta - half) / p,
    })
}

/// Which smoothing the test function needs before the spectral bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FunctionClass {
    /// Arbitrary smooth compactly supported functions: the kernel must also
    /// be smoothed in the compact directions, costing `eps^-((n^2-3n+6)/4)`.
    #[default]
    General,
    /// Functions invariant under the maximal compact subgroup; the kernel
    /// norm only grows like `eps^(-1/2)`.
    KInvariant,
}

impl FunctionClass {
    fn kernel_exponent(self, n: u32) -> Rational64 {
        let ni = n as i64;
        match self {
            FunctionClass::General => Rational64::new(ni * ni - 3 * ni + 6, 4),
            FunctionClass::KInvariant => Rational64::new(1, 2),
        }
    }
}

/// Balanced thickening and the resulting error prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonChoice {
    pub eps: f64,
    /// Power of `T` in the total error.
    pub predicted_error_exponent: f64,
    /// Power of `log T` in the total error.
    pub log_power: f64,
    /// `eps T^(delta-n) |F|_{1,inf}`.
    pub thickening_term: f64,
    /// `eps^-k T^(-n/2) log T |F|_Gamma`.
    pub spectral_term: f64,
    /// `false` when the balanced `eps` is at least `1/2`, i.e. `T` is too
    /// small for the asymptotic regime.
    pub asymptotic: bool,
}

/// Exact `(eps T-exponent, error T-exponent, log power)` of the balanced choice.
pub fn error_exponents_exact(
    n: u32,
    delta: Rational64,
    class: FunctionClass,
) -> (Rational64, Rational64, Rational64) {
    let ni = n as i64;
    let k = class.kernel_exponent(n);
    let inv = Rational64::from_integer(1) / (Rational64::from_integer(1) + k);
    let eps_t = -(delta - Rational64::new(ni, 2)) * inv;
    let err_t = delta - Rational64::from_integer(ni) + eps_t;
    (eps_t, err_t, inv)
}

pub fn epsilon_optimizer_rank1(
    n: u32,
    delta: f64,
    t: f64,
    norm_gamma: f64,
    norm_1inf: f64,
    class: FunctionClass,
) -> Result<EpsilonChoice> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if !(t.is_finite() && t.ln() >= 1.0 - 1e-15) {
        return Err(domain(format!("T must satisfy log T >= 1, got T = {t}")));
    }
    if !(norm_gamma > 0.0 && norm_1inf > 0.0) {
        return Err(domain("norms must be positive"));
    }
    let nf = n as f64;
    if !(delta > nf / 2.0 && delta <= nf) {
        return Err(domain(format!("delta = {delta} outside ({}, {n}]", nf / 2.0)));
    }
    let k = *class.kernel_exponent(n).numer() as f64 / *class.kernel_exponent(n).denom() as f64;
    let lt = t.ln();
    let power = 1.0 / (1.0 + k);
    let eps = ((nf / 2.0 - delta) * lt + (lt * norm_gamma / norm_1inf).ln()) * power;
    let eps = eps.exp();
    let thickening_term = eps * t.powf(delta - nf) * norm_1inf;
    let spectral_term = eps.powf(-k) * t.powf(-nf / 2.0) * lt * norm_gamma;
    Ok(EpsilonChoice {
        eps,
        predicted_error_exponent: delta - nf - (delta - nf / 2.0) * power,
        log_power: power,
        thickening_term,
        spectral_term,
        asymptotic: eps < 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_remark() {
        let b = exponent_budget(2, 1.305, 1.1).unwrap();
        assert_eq!(b.p, 8.0);
        assert!((b.eta_cont - (1.305 - 1.0) / 2.0).abs() < 1e-15);
        assert!((b.eta_s1 - (1.305 - 1.1) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn range_violations() {
        assert!(exponent_budget(2, 0.9, 1.0).is_err());
        assert!(exponent_budget(2, 1.5, 1.6).is_err());
        assert!(exponent_budget(2, 2.5, 1.2).is_err());
        assert!(epsilon_optimizer_rank1(1, 1.0, 2.0, 1.0, 1.0, FunctionClass::General).is_err());
    }

    #[test]
    fn log_factor_one_at_e() {
        let e = std::f64::consts::E;
        let c = epsilon_optimizer_rank1(2, 1.5, e, 1.0, 1.0, FunctionClass::General).unwrap();
        assert!((c.eps - e.powf(-4.0 * 0.5 / 8.0)).abs() < 1e-15);
        assert!(!c.asymptotic);
    }

    #[test]
    fn terms_balance() {
        for n in 1..=6 {
            let c = epsilon_optimizer_rank1(n, n as f64 * 0.9, 100.0, 2.0, 0.7, FunctionClass::General)
                .unwrap();
            let rel = (c.thickening_term - c.spectral_term).abs() / c.spectral_term;
            assert!(rel < 1e-12, "n = {n}: {rel}");
        }
    }

    #[test]
    fn k_invariant_surface_rate() {
        let (eps_t, err_t, log_p) =
            error_exponents_exact(1, Rational64::from_integer(1), FunctionClass::KInvariant);
        assert_eq!(eps_t, Rational64::new(-1, 3));
        assert_eq!(err_t, Rational64::new(-1, 3));
        assert_eq!(log_p, Rational64::new(2, 3));
    }
}
