//! Polynomial-coefficient differential operators in the torus variables
//! `y_1, ..., y_m`, applied to power functions by exact calculus.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// `coeff * prod y_i^{y_pow[i]} * prod d^{deriv[i]} / dy_i^{deriv[i]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub y_pow: Vec<u32>,
    pub deriv: Vec<u32>,
}

impl Term {
    pub fn new(coeff: f64, y_pow: &[u32], deriv: &[u32]) -> Self {
        Self {
            coeff,
            y_pow: y_pow.to_vec(),
            deriv: deriv.to_vec(),
        }
    }

    /// Equidimensional terms map `y^s` to a multiple of itself.
    pub fn is_euler(&self) -> bool {
        self.y_pow == self.deriv
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    dim: usize,
    terms: Vec<Term>,
}

/// `s (s-1) ... (s-k+1)`.
pub fn falling(s: Complex64, k: u32) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (s - j as f64))
}

impl DiffOperator {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.y_pow.len() != dim || t.deriv.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: t.y_pow.len().max(t.deriv.len()),
                });
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_euler(&self) -> bool {
        self.terms.iter().all(Term::is_euler)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// Scalar `c` with `D y^s = c y^s`; requires every term to be Euler.
    pub fn monomial_scalar(&self, s: &[Complex64]) -> Result<Complex64> {
        self.check_dim(s.len())?;
        if !self.is_euler() {
            return Err(domain("operator does not preserve power functions"));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                t.deriv
                    .iter()
                    .zip(s)
                    .fold(Complex64::new(t.coeff, 0.0), |acc, (&k, &si)| acc * falling(si, k))
            })
            .sum())
    }

    /// `(D y^s)(y) / y^s` computed by differentiating the power function term
    /// by term and evaluating at `y`.
    pub fn ratio_on_monomial(&self, s: &[Complex64], y: &[f64]) -> Result<Complex64> {
        self.check_dim(s.len())?;
        self.check_dim(y.len())?;
        if y.iter().any(|&v| !(v > 0.0)) {
            return Err(domain("torus coordinates must be positive"));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let mut acc = Complex64::new(t.coeff, 0.0);
                for i in 0..self.dim {
                    let shift = t.y_pow[i] as f64 - t.deriv[i] as f64;
                    acc *= falling(s[i], t.deriv[i]) * y[i].powf(shift);
                }
                acc
            })
            .sum())
    }

    /// Applies the operator to `f` at `y` using central finite differences
    /// with relative step `h_rel` and a nine-point stencil in each variable.
    pub fn apply_finite_difference(
        &self,
        f: impl Fn(&[f64]) -> f64,
        y: &[f64],
        h_rel: f64,
    ) -> Result<f64> {
        self.check_dim(y.len())?;
        let offsets: Vec<f64> = (-4..=4).map(|k| k as f64).collect();
        let mut total = 0.0;
        for t in &self.terms {
            let steps: Vec<f64> = y.iter().map(|v| h_rel * v).collect();
            let stencils: Vec<Vec<f64>> = t
                .deriv
                .iter()
                .zip(&steps)
                .map(|(&k, &h)| {
                    let w = fornberg_weights(&offsets, k as usize);
                    w.into_iter().map(|c| c / h.powi(k as i32)).collect()
                })
                .collect();
            let mut deriv = 0.0;
            let mut idx = vec![0usize; self.dim];
            let mut point = y.to_vec();
            loop {
                let mut w = 1.0;
                for i in 0..self.dim {
                    if t.deriv[i] == 0 {
                        point[i] = y[i];
                    } else {
                        w *= stencils[i][idx[i]];
                        point[i] = y[i] + offsets[idx[i]] * steps[i];
                    }
                }
                if w != 0.0 {
                    deriv += w * f(&point);
                }
                // Advance the multi-index over differentiated axes only.
                let mut axis = 0;
                loop {
                    if axis == self.dim {
                        break;
                    }
                    if t.deriv[axis] == 0 {
                        axis += 1;
                        continue;
                    }
                    idx[axis] += 1;
                    if idx[axis] < offsets.len() {
                        break;
                    }
                    idx[axis] = 0;
                    axis += 1;
                }
                if axis == self.dim {
                    break;
                }
            }
            let coeff = (0..self.dim).fold(t.coeff, |acc, i| acc * y[i].powi(t.y_pow[i] as i32));
            total += coeff * deriv;
        }
        Ok(total)
    }
}

/// Finite-difference weights for the `m`-th derivative at 0 on the given grid.
pub fn fornberg_weights(grid: &[f64], m: usize) -> Vec<f64> {
    let n = grid.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = grid[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = grid[i];
        for j in 0..i {
            let c3 = grid[i] - grid[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_second_derivative_three_point() {
        let w = fornberg_weights(&[-1.0, 0.0, 1.0], 2);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
        let w = fornberg_weights(&[-1.0, 0.0, 1.0], 0);
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn euler_operator_scalar_and_ratio_agree() {
        let op = DiffOperator::new(
            2,
            vec![Term::new(1.0, &[2, 0], &[2, 0]), Term::new(-1.0, &[1, 1], &[1, 1])],
        )
        .unwrap();
        let s = [Complex64::new(1.5, 0.2), Complex64::new(-0.3, 1.0)];
        let a = op.monomial_scalar(&s).unwrap();
        let b = op.ratio_on_monomial(&s, &[1.7, 0.4]).unwrap();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn non_euler_rejected() {
        let op = DiffOperator::new(1, vec![Term::new(1.0, &[0], &[1])]).unwrap();
        assert!(op.monomial_scalar(&[Complex64::new(1.0, 0.0)]).is_err());
        assert!(DiffOperator::new(2, vec![Term::new(1.0, &[0], &[1])]).is_err());
    }

    #[test]
    fn finite_difference_matches_exact() {
        let op = DiffOperator::new(
            2,
            vec![Term::new(2.0, &[2, 1], &[2, 1]), Term::new(1.0, &[0, 1], &[0, 1])],
        )
        .unwrap();
        let f = |y: &[f64]| y[0].powf(2.5) * y[1].powf(-0.5);
        let y = [1.3, 0.8];
        let fd = op.apply_finite_difference(f, &y, 0.05).unwrap();
        let s = [Complex64::new(2.5, 0.0), Complex64::new(-0.5, 0.0)];
        let exact = op.monomial_scalar(&s).unwrap().re * f(&y);
        assert!((fd - exact).abs() < 1e-8 * exact.abs(), "{fd} vs {exact}");
    }
}
