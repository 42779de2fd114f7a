use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lambda::{lambda_from_nu, LambdaPair, NuPair};
use crate::error::{Error, Result};

const ORBIT_SIZE: usize = 6;
const DEDUP_RADIUS: f64 = 1e-7;
const RESIDUAL_TOL: f64 = 1e-9;

/// A distinct solution of the `nu` system together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitRoot {
    pub nu: NuPair,
    pub multiplicity: usize,
}

type C = Complex64;

fn residual(nu: &NuPair, lp: &LambdaPair) -> [C; 2] {
    let l = lambda_from_nu(nu);
    [l.lambda1 - lp.lambda1, l.lambda2 - lp.lambda2]
}

fn residual_norm(nu: &NuPair, lp: &LambdaPair) -> f64 {
    let r = residual(nu, lp);
    r[0].norm().max(r[1].norm())
}

/// Jacobian of `lambda_from_nu`.
pub(crate) fn jacobian(nu: &NuPair) -> [[C; 2]; 2] {
    let (a, b) = (nu.nu1, nu.nu2);
    let q = 2.0 * a * a + 2.0 * b * b + 5.0 * a * b - 3.0 * a - 3.0 * b;
    [
        [-3.0 * (2.0 * a - 1.0 + b), -3.0 * (2.0 * b - 1.0 + a)],
        [
            -q + (b - a) * (4.0 * a + 5.0 * b - 3.0),
            q + (b - a) * (4.0 * b + 5.0 * a - 3.0),
        ],
    ]
}

fn solve2(m: [[C; 2]; 2], rhs: [C; 2]) -> Option<[C; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-300 || det.norm() <= 1e-15 * scale * scale {
        return None;
    }
    Some([
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ])
}

/// Fixed generic linear form used for deflation.
const DEFLATION_FORM: [C; 2] = [C::new(0.8313, 0.3127), C::new(-0.4419, 0.7781)];

fn deflated_newton(seed: NuPair, lp: &LambdaPair, known: &[NuPair]) -> Option<NuPair> {
    let mut nu = seed;
    for _ in 0..200 {
        let f = residual(&nu, lp);
        let j = jacobian(&nu);
        // Newton for M F with M = prod (1/l_k + 1), l_k = a . (nu - r_k):
        // J' = J + F (grad M / M)^T, grad M / M = -sum a / (l_k (1 + l_k)).
        let mut w = [C::new(0.0, 0.0); 2];
        for r in known {
            let l = DEFLATION_FORM[0] * (nu.nu1 - r.nu1) + DEFLATION_FORM[1] * (nu.nu2 - r.nu2);
            let den = l * (1.0 + l);
            if den.norm() == 0.0 {
                return None;
            }
            w[0] += DEFLATION_FORM[0] / den;
            w[1] += DEFLATION_FORM[1] / den;
        }
        let jd = [
            [j[0][0] - f[0] * w[0], j[0][1] - f[0] * w[1]],
            [j[1][0] - f[1] * w[0], j[1][1] - f[1] * w[1]],
        ];
        let step = solve2(jd, [-f[0], -f[1]])?;
        nu = NuPair::new(nu.nu1 + step[0], nu.nu2 + step[1]);
        if !(nu.nu1.norm() < 1e8 && nu.nu2.norm() < 1e8) {
            return None;
        }
        if residual_norm(&nu, lp) <= 1e-14 * residual_tol(lp) / RESIDUAL_TOL {
            return Some(nu);
        }
        let size = step[0].norm().hypot(step[1].norm());
        if size <= 1e-13 * (1.0 + nu.nu1.norm().hypot(nu.nu2.norm())) {
            return Some(nu);
        }
    }
    None
}

/// Plain Newton, keeping the iterate with the smallest residual.
fn polish(start: NuPair, lp: &LambdaPair) -> NuPair {
    let mut best = start;
    let mut best_res = residual_norm(&start, lp);
    let mut nu = start;
    for _ in 0..60 {
        let f = residual(&nu, lp);
        let Some(step) = solve2(jacobian(&nu), [-f[0], -f[1]]) else {
            break;
        };
        nu = NuPair::new(nu.nu1 + step[0], nu.nu2 + step[1]);
        let r = residual_norm(&nu, lp);
        if r < best_res {
            best = nu;
            best_res = r;
        }
        if r == 0.0 {
            break;
        }
    }
    best
}

fn residual_tol(lp: &LambdaPair) -> f64 {
    RESIDUAL_TOL * lp.lambda1.norm().max(lp.lambda2.norm()).max(1.0)
}

fn grid_seeds() -> Vec<NuPair> {
    let mut seeds = Vec::with_capacity(36);
    for i in 0..6 {
        for j in 0..6 {
            let x = -1.0 + 3.0 * (i as f64 + 0.5) / 6.0;
            let y = -1.0 + 3.0 * (j as f64 + 0.5) / 6.0;
            let k = (i * 6 + j) as f64;
            seeds.push(NuPair::new(
                C::new(x, 0.05 + 0.1 * (1.3 * k).sin()),
                C::new(y, -0.05 + 0.1 * (0.7 * k + 0.4).cos()),
            ));
        }
    }
    seeds
}

fn random_seeds(count: usize) -> Vec<NuPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b17);
    (0..count)
        .map(|_| {
            NuPair::new(
                C::new(rng.gen_range(-1.5..2.5), rng.gen_range(-1.0..1.0)),
                C::new(rng.gen_range(-1.5..2.5), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect()
}

fn near_singular(nu: &NuPair) -> bool {
    let j = jacobian(nu);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = j.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>();
    det.norm() <= 1e-4 * scale.max(1e-300)
}

/// Newton stalls at a distance of roughly `eps^(1/m)` from a root of
/// multiplicity `m`, so candidates near a singular root are merged with it.
fn same_root(known: &NuPair, candidate: &NuPair) -> bool {
    let d = known.distance(candidate);
    d <= DEDUP_RADIUS || (d <= 1e-3 && near_singular(known))
}

/// Distinct roots reachable from `seeds` by deflated Newton.
fn search(lp: &LambdaPair, seeds: &[NuPair], known: &mut Vec<NuPair>, merge_singular: bool) {
    let same = |k: &NuPair, r: &NuPair| {
        if merge_singular {
            same_root(k, r)
        } else {
            k.distance(r) <= DEDUP_RADIUS
        }
    };
    let tol = residual_tol(lp);
    for seed in seeds {
        if known.len() >= ORBIT_SIZE {
            break;
        }
        let deflated = deflated_newton(*seed, lp, known)
            .map(|c| polish(c, lp))
            .filter(|r| residual_norm(r, lp) <= tol && !known.iter().any(|k| same(k, r)));
        let Some(root) = deflated.or_else(|| {
            let r = polish(*seed, lp);
            (residual_norm(&r, lp) <= tol).then_some(r)
        }) else {
            continue;
        };
        if known.iter().any(|k| same(k, &root)) {
            continue;
        }
        known.push(root);
    }
}

/// Splits `lp` slightly, solves the split system and assigns the six simple
/// roots to the nearest unperturbed roots to read off multiplicities.
fn multiplicities(lp: &LambdaPair, distinct: &mut Vec<NuPair>) -> Option<Vec<usize>> {
    let scale = lp.lambda1.norm().max(lp.lambda2.norm()).max(1.0);
    let delta = 1e-9 * scale;
    let split = LambdaPair::new(
        lp.lambda1 + C::new(0.6, 0.8) * delta,
        lp.lambda2 + C::new(-0.8, 0.6) * delta,
    );
    let mut seeds: Vec<NuPair> = Vec::new();
    for r in distinct.iter() {
        for k in 0..6 {
            let phase = C::from_polar(1e-3, k as f64 * 1.047 + 0.3);
            seeds.push(NuPair::new(r.nu1 + phase, r.nu2 - phase * 0.7));
        }
    }
    seeds.extend(grid_seeds());
    seeds.extend(random_seeds(100));
    let mut split_roots = Vec::new();
    search(&split, &seeds, &mut split_roots, false);
    if split_roots.len() != ORBIT_SIZE {
        return None;
    }
    let mut counts = vec![0usize; distinct.len()];
    let mut sums = vec![(C::new(0.0, 0.0), C::new(0.0, 0.0)); distinct.len()];
    for p in &split_roots {
        let (idx, dist) = distinct
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.distance(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if dist > 1e-2 {
            // A root the unsplit search missed.
            let new_root = polish(*p, lp);
            if residual_norm(&new_root, lp) > residual_tol(lp) {
                return None;
            }
            distinct.push(new_root);
            return multiplicities(lp, distinct);
        }
        counts[idx] += 1;
        sums[idx].0 += p.nu1;
        sums[idx].1 += p.nu2;
    }
    if counts.iter().any(|&c| c == 0) {
        return None;
    }
    // The centroid of a split cluster is a better estimate of a multiple root
    // than the stalled Newton iterate.
    for (i, r) in distinct.iter_mut().enumerate() {
        if counts[i] > 1 {
            let m = counts[i] as f64;
            let centroid = NuPair::new(sums[i].0 / m, sums[i].1 / m);
            if residual_norm(&centroid, lp) <= residual_norm(r, lp) {
                *r = centroid;
            }
        }
    }
    Some(counts)
}

/// Distinct roots of `lambda_from_nu(nu) = lp` with multiplicities summing to 6.
pub fn nu_orbit_roots(lp: &LambdaPair) -> Result<Vec<OrbitRoot>> {
    let mut distinct = Vec::new();
    search(lp, &grid_seeds(), &mut distinct, true);
    if distinct.len() < ORBIT_SIZE {
        search(lp, &random_seeds(100), &mut distinct, true);
    }
    let counts = if distinct.len() == ORBIT_SIZE {
        vec![1; ORBIT_SIZE]
    } else if distinct.is_empty() {
        return Err(Error::IncompleteOrbit { found: distinct });
    } else {
        match multiplicities(lp, &mut distinct) {
            Some(c) => c,
            None => return Err(Error::IncompleteOrbit { found: distinct }),
        }
    };
    Ok(distinct
        .into_iter()
        .zip(counts)
        .map(|(nu, multiplicity)| OrbitRoot { nu, multiplicity })
        .collect())
}

/// The six solutions of `lambda_from_nu(nu) = lp`, repeated by multiplicity.
pub fn nu_orbit(lp: &LambdaPair) -> Result<Vec<NuPair>> {
    Ok(nu_orbit_roots(lp)?
        .into_iter()
        .flat_map(|r| std::iter::repeat_n(r.nu, r.multiplicity))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_matches_differences() {
        let nu = NuPair::new(C::new(0.3, 0.1), C::new(-0.2, 0.4));
        let j = jacobian(&nu);
        let h = 1e-6;
        let f0 = lambda_from_nu(&NuPair::new(nu.nu1 + h, nu.nu2));
        let f1 = lambda_from_nu(&NuPair::new(nu.nu1 - h, nu.nu2));
        assert!(((f0.lambda1 - f1.lambda1) / (2.0 * h) - j[0][0]).norm() < 1e-8);
        assert!(((f0.lambda2 - f1.lambda2) / (2.0 * h) - j[1][0]).norm() < 1e-8);
        let f0 = lambda_from_nu(&NuPair::new(nu.nu1, nu.nu2 + h));
        let f1 = lambda_from_nu(&NuPair::new(nu.nu1, nu.nu2 - h));
        assert!(((f0.lambda1 - f1.lambda1) / (2.0 * h) - j[0][1]).norm() < 1e-8);
        assert!(((f0.lambda2 - f1.lambda2) / (2.0 * h) - j[1][1]).norm() < 1e-8);
    }

    #[test]
    fn generic_orbit_has_six_simple_roots() {
        let nu = NuPair::real(0.21, 0.67);
        let lp = lambda_from_nu(&nu);
        let roots = nu_orbit_roots(&lp).unwrap();
        assert_eq!(roots.len(), 6);
        assert!(roots.iter().any(|r| r.nu.distance(&nu) < 1e-9));
    }

    #[test]
    fn tempered_base_has_double_root() {
        let roots = nu_orbit_roots(&LambdaPair::real(1.0, 0.0)).unwrap();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 6);
        let base = NuPair::real(1.0 / 3.0, 1.0 / 3.0);
        let r = roots.iter().find(|r| r.nu.distance(&base) < 1e-6).unwrap();
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn trivial_point_has_triple_roots() {
        let roots = nu_orbit_roots(&LambdaPair::real(0.0, 0.0)).unwrap();
        let at_origin = roots
            .iter()
            .find(|r| r.nu.distance(&NuPair::real(0.0, 0.0)) < 1e-6)
            .unwrap();
        assert_eq!(at_origin.multiplicity, 3);
        assert_eq!(nu_orbit(&LambdaPair::real(0.0, 0.0)).unwrap().len(), 6);
    }
}
