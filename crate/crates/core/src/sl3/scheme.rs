use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::lambda::{sr_from_nu, LambdaPair, NuPair, SRPair};
use super::orbit::{jacobian, nu_orbit_roots};
use crate::error::{domain, Error, Result};
use crate::rank_one::ThickKernel;

/// Default interpolation nodes `(b_1, b_2)`.
pub const DEFAULT_NODES: [(f64, f64); 6] =
    [(2.0, 3.0), (2.0, 5.0), (3.0, 3.0), (3.0, 5.0), (5.0, 3.0), (5.0, 5.0)];

const MAX_CONDITION: f64 = 1e12;

/// `int int psi_1 psi_2 y_1^s y_2^r dy_1 dy_2 / (y_1^3 y_2^3)` for a pair of
/// kernels with the `y^-3` measure weight.
pub fn alpha_i(k1: &ThickKernel, k2: &ThickKernel, sr: &SRPair) -> Result<Complex64> {
    if k1.n() != 2 || k2.n() != 2 {
        return Err(domain("alpha_i needs kernels with measure dy / y^3 (n = 2)"));
    }
    Ok(k1.power_moment(sr.s) * k2.power_moment(sr.r))
}

/// One solution of the homogeneous system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFunction {
    /// `y_1^s y_2^r`.
    Power(SRPair),
    /// `(ds log y_1 + dr log y_2) y_1^s y_2^r`, the derivative of the power
    /// function along a null direction of the eigenvalue map at a double root.
    Confluent {
        sr: SRPair,
        direction: (Complex64, Complex64),
    },
}

impl BasisFunction {
    pub fn exponents(&self) -> SRPair {
        match *self {
            BasisFunction::Power(sr) | BasisFunction::Confluent { sr, .. } => sr,
        }
    }

    /// Thickened moment at heights `(t1, t2)`.
    pub fn moment(&self, t1: f64, t2: f64, eps: f64) -> Result<Complex64> {
        let k1 = ThickKernel::new(2, t1, eps)?;
        let k2 = ThickKernel::new(2, t2, eps)?;
        Ok(match *self {
            BasisFunction::Power(sr) => alpha_i(&k1, &k2, &sr)?,
            BasisFunction::Confluent { sr, direction } => {
                direction.0 * k1.log_power_moment(sr.s) * k2.power_moment(sr.r)
                    + direction.1 * k1.power_moment(sr.s) * k2.log_power_moment(sr.r)
            }
        })
    }

    /// Pointwise value at `(y1, y2)`.
    pub fn value(&self, y1: f64, y2: f64) -> Complex64 {
        let sr = self.exponents();
        let base = (sr.s * y1.ln() + sr.r * y2.ln()).exp();
        match *self {
            BasisFunction::Power(_) => base,
            BasisFunction::Confluent { direction, .. } => {
                (direction.0 * y1.ln() + direction.1 * y2.ln()) * base
            }
        }
    }
}

/// Six-node interpolation scheme for thickened `SL(3)` averages.
#[derive(Debug, Clone)]
pub struct NodeScheme6 {
    lambda: LambdaPair,
    eps: f64,
    nodes: [(f64, f64); 6],
    basis: Vec<BasisFunction>,
    orbit: Vec<NuPair>,
    matrix: DMatrix<Complex64>,
    condition: f64,
}

fn null_direction(nu: &NuPair) -> (Complex64, Complex64) {
    let j = jacobian(nu);
    let row = if j[0][0].norm() + j[0][1].norm() >= j[1][0].norm() + j[1][1].norm() {
        j[0]
    } else {
        j[1]
    };
    let (v1, v2) = (row[1], -row[0]);
    let norm = v1.norm().hypot(v2.norm());
    let (v1, v2) = (v1 / norm, v2 / norm);
    // nu-direction to (s, r)-direction.
    (v1 + 2.0 * v2, 2.0 * v1 + v2)
}

pub fn build_node_scheme(lp: &LambdaPair, nodes: &[(f64, f64); 6], eps: f64) -> Result<NodeScheme6> {
    for (i, a) in nodes.iter().enumerate() {
        if !(a.0 > 1.0 && a.1 > 1.0) {
            return Err(domain(format!("node {a:?} must have both coordinates > 1")));
        }
        if nodes[..i].contains(a) {
            return Err(domain(format!("node {a:?} repeated")));
        }
    }
    let roots = nu_orbit_roots(lp)?;
    let mut basis = Vec::with_capacity(6);
    let mut orbit = Vec::with_capacity(6);
    for root in &roots {
        let sr = sr_from_nu(&root.nu);
        match root.multiplicity {
            1 => basis.push(BasisFunction::Power(sr)),
            2 => {
                basis.push(BasisFunction::Power(sr));
                basis.push(BasisFunction::Confluent {
                    sr,
                    direction: null_direction(&root.nu),
                });
            }
            m => {
                return Err(domain(format!(
                    "orbit root {:?} has multiplicity {m}; only double roots are supported",
                    root.nu
                )))
            }
        }
        orbit.extend(std::iter::repeat_n(root.nu, root.multiplicity));
    }
    let mut matrix = DMatrix::zeros(6, 6);
    for (i, f) in basis.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            matrix[(i, j)] = f.moment(b.0, b.1, eps)?;
        }
    }
    let sv = matrix.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition < MAX_CONDITION) {
        return Err(Error::NodeChoice { condition });
    }
    Ok(NodeScheme6 {
        lambda: *lp,
        eps,
        nodes: *nodes,
        basis,
        orbit,
        matrix,
        condition,
    })
}

impl NodeScheme6 {
    pub fn lambda(&self) -> LambdaPair {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn nodes(&self) -> &[(f64, f64); 6] {
        &self.nodes
    }

    pub fn basis(&self) -> &[BasisFunction] {
        &self.basis
    }

    /// The six orbit points, repeated by multiplicity.
    pub fn orbit(&self) -> &[NuPair] {
        &self.orbit
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Two-norm condition number of the node matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Weights `K_j` with `alpha_i(T) = sum_j K_j alpha_i(b_j)` for all `i`.
    pub fn weights(&self, t1: f64, t2: f64) -> Result<[Complex64; 6]> {
        let rhs = DVector::from_iterator(
            6,
            self.basis
                .iter()
                .map(|f| f.moment(t1, t2, self.eps))
                .collect::<Result<Vec<_>>>()?,
        );
        let sol = self
            .matrix
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::NodeChoice {
                condition: f64::INFINITY,
            })?;
        let mut out = [Complex64::new(0.0, 0.0); 6];
        out.copy_from_slice(sol.as_slice());
        Ok(out)
    }

    /// Thickened moments of a mixture `sum_i A_i f_i` at `(t1, t2)`.
    pub fn mixture_moment(&self, coeffs: &[Complex64; 6], t1: f64, t2: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, f) in coeffs.iter().zip(&self.basis) {
            acc += c * f.moment(t1, t2, self.eps)?;
        }
        Ok(acc)
    }
}

/// `sum_i c_i T_1^{s_i} T_2^{r_i}` over the orbit of `lp` (roots repeated by
/// multiplicity, in the order returned by [`super::nu_orbit`]).
pub fn m_t(lp: &LambdaPair, t1: f64, t2: f64, coeffs: &[Complex64; 6]) -> Result<Complex64> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(domain("heights must be positive"));
    }
    let orbit = super::nu_orbit(lp)?;
    Ok(orbit
        .iter()
        .zip(coeffs)
        .map(|(nu, c)| {
            let sr = sr_from_nu(nu);
            c * (sr.s * t1.ln() + sr.r * t2.ln()).exp()
        })
        .sum())
}
