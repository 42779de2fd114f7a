//! Exponent tables, `I`-functions and Casimir monomial calculus for `SL(n)`.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::diffop::{DiffOperator, Term};
use crate::error::{domain, Error, Result};

/// The integer matrix `b_ij` with `s_i = sum_j b_ij nu_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTable {
    n: usize,
    b: Vec<Vec<i64>>,
}

impl ExponentTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the torus, `n - 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i - 1][j - 1]
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.b.iter().map(|r| r.iter().sum()).collect()
    }
}

/// `b_ij = ij` for `i + j <= n`, `(n - i)(n - j)` otherwise (1-based).
pub fn b_table(n: usize) -> Result<ExponentTable> {
    if n < 2 {
        return Err(domain(format!("n must be at least 2, got {n}")));
    }
    let b = (1..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    let (i, j, n) = (i as i64, j as i64, n as i64);
                    if i + j <= n {
                        i * j
                    } else {
                        (n - i) * (n - j)
                    }
                })
                .collect()
        })
        .collect();
    Ok(ExponentTable { n, b })
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::Dimension { expected, got })
    } else {
        Ok(())
    }
}

pub fn s_exponents(tbl: &ExponentTable, nu: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(tbl.rank(), nu.len())?;
    Ok(tbl
        .b
        .iter()
        .map(|row| row.iter().zip(nu).map(|(&b, &v)| v * b as f64).sum())
        .collect())
}

/// `prod_i y_i^{s_i}`.
pub fn i_function(tbl: &ExponentTable, nu: &[Complex64], y: &[f64]) -> Result<Complex64> {
    check_len(tbl.rank(), y.len())?;
    if y.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("torus coordinates must be positive"));
    }
    let s = s_exponents(tbl, nu)?;
    Ok(s.iter()
        .zip(y)
        .map(|(si, yi)| si * yi.ln())
        .sum::<Complex64>()
        .exp())
}

/// Exponents `(row sum of b) / n` of the continuous-spectrum growth factor.
pub fn i_cont_exponents(n: usize) -> Result<Vec<Rational64>> {
    let tbl = b_table(n)?;
    Ok(tbl
        .row_sums()
        .into_iter()
        .map(|r| Rational64::new(r, n as i64))
        .collect())
}

/// `prod_i T_i^{(b_i1 + ... + b_i,n-1) / n}`.
pub fn i_cont(n: usize, t: &[f64]) -> Result<f64> {
    let e = i_cont_exponents(n)?;
    check_len(e.len(), t.len())?;
    if t.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("heights must be positive"));
    }
    Ok(e.iter()
        .zip(t)
        .map(|(r, ti)| ti.ln() * (*r.numer() as f64 / *r.denom() as f64))
        .sum::<f64>()
        .exp())
}

/// `n!`, the number of Weyl-group images of a spectral parameter.
pub fn weyl_orbit_size(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(domain(format!("n must be at least 2, got {n}")));
    }
    if n > 20 {
        return Err(domain(format!("{n}! overflows 64 bits")));
    }
    Ok((1..=n as u64).product())
}

/// `sum_i y_i^2 d_ii - sum_i y_i y_{i+1} d_{i,i+1}` on the rank-`(n-1)` torus.
pub fn laplace_beltrami_operator(n: usize) -> Result<DiffOperator> {
    if n < 2 {
        return Err(domain(format!("n must be at least 2, got {n}")));
    }
    let m = n - 1;
    let mut terms = Vec::new();
    for i in 0..m {
        let mut p = vec![0; m];
        p[i] = 2;
        terms.push(Term::new(1.0, &p, &p));
    }
    for i in 0..m.saturating_sub(1) {
        let mut p = vec![0; m];
        p[i] = 1;
        p[i + 1] = 1;
        terms.push(Term::new(-1.0, &p, &p));
    }
    DiffOperator::new(m, terms)
}

/// `sum s_i (s_i - 1) - sum s_i s_{i+1}`.
pub fn laplace_beltrami_monomial(n: usize, s: &[Complex64]) -> Result<Complex64> {
    if n < 2 {
        return Err(domain(format!("n must be at least 2, got {n}")));
    }
    check_len(n - 1, s.len())?;
    let diag: Complex64 = s.iter().map(|v| v * (v - 1.0)).sum();
    let off: Complex64 = s.windows(2).map(|w| w[0] * w[1]).sum();
    Ok(diag - off)
}

/// The three `n = 4` Casimir operators after integrating out `x`.
pub fn casimir_n4_operator(index: u32) -> Result<DiffOperator> {
    let t = |c: f64, p: [u32; 3]| Term::new(c, &p, &p);
    let terms = match index {
        1 => vec![
            t(1.0, [2, 0, 0]),
            t(1.0, [0, 2, 0]),
            t(1.0, [0, 0, 2]),
            t(-1.0, [1, 1, 0]),
            t(-1.0, [0, 1, 1]),
        ],
        2 => vec![
            t(1.0, [2, 0, 0]),
            t(-3.0, [2, 1, 0]),
            t(-7.0, [1, 1, 0]),
            t(3.0, [1, 2, 0]),
            t(-2.0, [0, 0, 2]),
            t(-1.0, [0, 1, 1]),
            t(3.0, [0, 1, 2]),
            t(4.0, [0, 2, 0]),
            t(-3.0, [0, 2, 1]),
        ],
        3 => vec![
            t(1.0, [4, 0, 0]),
            t(4.0, [3, 0, 0]),
            t(-2.0, [3, 1, 0]),
            t(21.0, [2, 0, 0]),
            t(-12.0, [2, 1, 0]),
            t(3.0, [2, 2, 0]),
            t(-9.0, [1, 1, 0]),
            t(6.0, [1, 2, 0]),
            t(-2.0, [1, 3, 0]),
            t(-3.0, [0, 0, 2]),
            t(4.0, [0, 0, 3]),
            t(1.0, [0, 0, 4]),
            t(3.0, [0, 1, 1]),
            t(-2.0, [0, 1, 3]),
            t(3.0, [0, 2, 0]),
            t(-6.0, [0, 2, 1]),
            t(3.0, [0, 2, 2]),
            t(4.0, [0, 3, 0]),
            t(-2.0, [0, 3, 1]),
            t(1.0, [0, 4, 0]),
        ],
        _ => return Err(domain(format!("n = 4 Casimir index must be 1, 2 or 3, got {index}"))),
    };
    DiffOperator::new(3, terms)
}

/// Scalar by which the displayed operator multiplies `y_1^s1 y_2^s2 y_3^s3`.
pub fn casimir_n4_monomial(index: u32, s: &[Complex64; 3]) -> Result<Complex64> {
    casimir_n4_operator(index)?.monomial_scalar(s)
}

/// Torus measure exponents and matching kernel window widths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureExponents {
    pub n: usize,
    /// Entry `k - 1` is `-k(n-k) - 1`.
    pub y_exponents: Vec<i64>,
    /// Entry `k - 1` is `k(n-k) + 1`.
    pub kernel_width_exponents: Vec<i64>,
}

pub fn kernel_widths(n: usize) -> Result<MeasureExponents> {
    if n < 2 {
        return Err(domain(format!("n must be at least 2, got {n}")));
    }
    let widths: Vec<i64> = (1..n as i64).map(|k| k * (n as i64 - k) + 1).collect();
    Ok(MeasureExponents {
        n,
        y_exponents: widths.iter().map(|w| -w).collect(),
        kernel_width_exponents: widths,
    })
}

/// Balanced thickening for `SL(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlnEpsilon {
    pub eps: f64,
    /// `eps |F|_{1,inf}`, equal to the total error up to a factor 2.
    pub thickening_term: f64,
    /// `eps^{-(n-1)/2} I_cont^{-1} prod log T_i |F|_Gamma`.
    pub spectral_term: f64,
    /// Power `2 / (n + 1)` applied to `I_cont^{-1} prod log T_i`.
    pub error_exponent: Rational64,
    pub asymptotic: bool,
}

pub fn epsilon_optimizer_sln(
    n: usize,
    t: &[f64],
    norm_gamma: f64,
    norm_1inf: f64,
) -> Result<SlnEpsilon> {
    let icont = i_cont(n, t)?;
    if t.iter().product::<f64>() < std::f64::consts::E * (1.0 - 1e-15) {
        return Err(domain("need prod T_i >= e"));
    }
    if t.iter().any(|&v| v <= 1.0) {
        return Err(domain("heights must exceed 1"));
    }
    if !(norm_gamma > 0.0 && norm_1inf > 0.0) {
        return Err(domain("norms must be positive"));
    }
    let logs: f64 = t.iter().map(|v| v.ln()).product();
    let power = 2.0 / (n as f64 + 1.0);
    let eps = (logs * norm_gamma / (icont * norm_1inf)).powf(power);
    Ok(SlnEpsilon {
        eps,
        thickening_term: eps * norm_1inf,
        spectral_term: eps.powf(-(n as f64 - 1.0) / 2.0) * logs * norm_gamma / icont,
        error_exponent: Rational64::new(2, n as i64 + 1),
        asymptotic: eps < 0.5,
    })
}

/// `sum_j c_j I_{nu_j}(T)`.
pub fn m_t_general(
    tbl: &ExponentTable,
    orbit: &[Vec<Complex64>],
    t: &[f64],
    coeffs: &[Complex64],
) -> Result<Complex64> {
    check_len(orbit.len(), coeffs.len())?;
    if orbit.len() as u64 > weyl_orbit_size(tbl.n)? {
        return Err(domain("orbit longer than the Weyl group"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (nu, c) in orbit.iter().zip(coeffs) {
        acc += c * i_function(tbl, nu, t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn small_tables() {
        assert_eq!(b_table(2).unwrap().entries(), &[vec![1]]);
        assert_eq!(b_table(3).unwrap().entries(), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(b_table(4).unwrap().row_sums(), vec![6, 8, 6]);
        assert_eq!(b_table(5).unwrap().get(2, 3), 6);
        assert!(b_table(1).is_err());
    }

    #[test]
    fn i_function_example() {
        let tbl = b_table(3).unwrap();
        let v = i_function(&tbl, &[c(1.0 / 3.0), c(1.0 / 3.0)], &[4.0, 9.0]).unwrap();
        assert!((v - 36.0).norm() < 1e-12);
        assert!(i_function(&tbl, &[c(0.1)], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn i_cont_n3_is_product() {
        assert!((i_cont(3, &[7.0, 11.0]).unwrap() - 77.0).abs() < 1e-12);
        assert_eq!(
            i_cont_exponents(4).unwrap(),
            vec![Rational64::new(3, 2), Rational64::new(2, 1), Rational64::new(3, 2)]
        );
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(weyl_orbit_size(3).unwrap(), 6);
        assert_eq!(weyl_orbit_size(20).unwrap(), 2432902008176640000);
        assert!(weyl_orbit_size(21).is_err());
    }

    #[test]
    fn frozen_n4_scalars() {
        let one = [c(1.0), c(1.0), c(1.0)];
        assert_eq!(casimir_n4_monomial(1, &one).unwrap(), c(-2.0));
        assert_eq!(casimir_n4_monomial(2, &one).unwrap(), c(-8.0));
        assert_eq!(casimir_n4_monomial(3, &one).unwrap(), c(-6.0));
        assert_eq!(casimir_n4_monomial(3, &[c(1.0), c(0.0), c(0.0)]).unwrap(), c(0.0));
        assert_eq!(casimir_n4_monomial(3, &[c(2.0), c(0.0), c(0.0)]).unwrap(), c(42.0));
        assert!(casimir_n4_monomial(4, &one).is_err());
    }

    #[test]
    fn widths() {
        let m = kernel_widths(3).unwrap();
        assert_eq!(m.kernel_width_exponents, vec![3, 3]);
        assert_eq!(kernel_widths(2).unwrap().kernel_width_exponents, vec![2]);
    }
}
