use num_complex::Complex64;

/// `(e^z - 1) / z`, continuous through `z = 0`.
pub(crate) fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // sum_{k>=0} z^k / (k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term = term * z / (k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Derivative of [`exprel`]: `(z e^z - e^z + 1) / z^2`.
pub(crate) fn exprel_prime(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // sum_{k>=1} k z^(k-1) / (k+1)!
        let mut power = Complex64::new(1.0, 0.0);
        let mut fact = 2.0;
        let mut sum = Complex64::new(0.5, 0.0);
        for k in 2..32 {
            power *= z;
            fact *= k as f64 + 1.0;
            let term = power * (k as f64) / fact;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        let e = z.exp();
        (z * e - e + 1.0) / (z * z)
    }
}

/// `sin(x) / x`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exprel_is_continuous_across_branch_switch() {
        for &r in &[0.49999, 0.5, 0.50001] {
            let z = Complex64::from_polar(r, 0.7);
            let direct = (z.exp() - 1.0) / z;
            assert!((exprel(z) - direct).norm() < 1e-14);
        }
        assert!((exprel(Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-16);
    }

    #[test]
    fn exprel_prime_matches_difference_quotient() {
        for &z in &[
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(1.5, -0.7),
        ] {
            let h = 1e-6;
            let fd = (exprel(z + h) - exprel(z - h)) / (2.0 * h);
            assert!((exprel_prime(z) - fd).norm() < 1e-8, "{z}");
        }
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(-7, 3), 1);
        assert_eq!(gcd(0, 5), 5);
    }
}
