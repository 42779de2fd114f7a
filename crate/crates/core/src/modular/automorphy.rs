use super::geometry::UpperHalfPoint;
use crate::error::{domain, Error, Result};
use crate::rank_one::ThickKernel;
use crate::special::gcd;

const MAX_C: i64 = 1 << 24;
const MAX_TERMS: u64 = 1 << 30;

/// Bottom row `(c, d)` of a coset representative in `Gamma_inf \ SL(2, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub c: i64,
    pub d: i64,
}

impl Coset {
    /// `Im(gamma z) = y / |c z + d|^2`.
    pub fn image_height(&self, z: &UpperHalfPoint) -> f64 {
        let re = self.c as f64 * z.x + self.d as f64;
        let im = self.c as f64 * z.y;
        z.y / (re * re + im * im)
    }
}

fn check_kernel(k: &ThickKernel) -> Result<()> {
    if k.n() != 1 {
        return Err(domain("the modular surface needs a kernel with n = 1"));
    }
    Ok(())
}

/// Cosets with `Im(gamma z)` inside the kernel window.
pub fn contributing_cosets(k: &ThickKernel, z: &UpperHalfPoint) -> Result<Vec<Coset>> {
    check_kernel(k)?;
    let (y_lo, y_hi) = k.support();
    let y = z.y;
    let mut out = Vec::new();
    let identity = Coset { c: 0, d: 1 };
    if y >= y_lo && y <= y_hi {
        out.push(identity);
    }
    // |cz + d|^2 <= y / y_lo forces c^2 y^2 <= y / y_lo.
    let c_bound = (1.0 / (y * y_lo)).sqrt().ceil();
    if !(c_bound < MAX_C as f64) {
        return Err(Error::Capacity(format!(
            "c ranges up to {c_bound:e} at y = {y}"
        )));
    }
    let c_max = c_bound as i64;
    let mut visited: u64 = 0;
    for c in 1..=c_max {
        let cf = c as f64;
        let r2 = y / y_lo - cf * cf * y * y;
        if r2 < 0.0 {
            continue;
        }
        let r = r2.sqrt();
        let d_lo = (-cf * z.x - r).ceil() as i64;
        let d_hi = (-cf * z.x + r).floor() as i64;
        visited += (d_hi - d_lo + 1).max(0) as u64;
        if visited > MAX_TERMS {
            return Err(Error::Capacity(format!(
                "more than {MAX_TERMS} candidate cosets at y = {y}"
            )));
        }
        for d in d_lo..=d_hi {
            if gcd(c, d) != 1 {
                continue;
            }
            let coset = Coset { c, d };
            let h = coset.image_height(z);
            if h >= y_lo && h <= y_hi {
                out.push(coset);
            }
        }
    }
    Ok(out)
}

/// `sum over Gamma_inf \ Gamma of psi(Im(gamma z))`.
pub fn automorphized_kernel(k: &ThickKernel, z: &UpperHalfPoint) -> Result<f64> {
    Ok(contributing_cosets(k, z)?.len() as f64 * k.height())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_coset_on_support() {
        let k = ThickKernel::new(1, 10.0, 0.01).unwrap();
        let z = UpperHalfPoint { x: 0.3, y: 0.1 };
        let cosets = contributing_cosets(&k, &z).unwrap();
        assert!(cosets.contains(&Coset { c: 0, d: 1 }));
        assert!(automorphized_kernel(&k, &z).unwrap() >= k.height());
    }

    #[test]
    fn high_point_sees_nothing() {
        let k = ThickKernel::new(1, 10.0, 0.01).unwrap();
        let z = UpperHalfPoint { x: 0.2, y: 5.0 };
        assert_eq!(automorphized_kernel(&k, &z).unwrap(), 0.0);
    }

    #[test]
    fn rejects_higher_dimension() {
        let k = ThickKernel::new(2, 10.0, 0.01).unwrap();
        assert!(automorphized_kernel(&k, &UpperHalfPoint { x: 0.0, y: 1.0 }).is_err());
    }
}
