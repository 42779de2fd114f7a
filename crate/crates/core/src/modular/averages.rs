use std::cell::RefCell;
use std::f64::consts::PI;

use super::automorphy::Coset;
use super::bump::{BumpTestFunction, SupportBox};
use super::geometry::UpperHalfPoint;
use crate::error::{domain, Error, Result};
use crate::quadrature::{adaptive, doubling, relative_change, GaussLegendre};
use crate::rank_one::ThickKernel;
use crate::special::gcd;

const MAX_HOROCYCLE_PANELS: usize = 1 << 20;

/// Panel layout and stopping tolerance for the surface integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panels_x: usize,
    pub panels_y: usize,
    pub nodes_per_panel: usize,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels_x: 64,
            panels_y: 32,
            nodes_per_panel: 16,
            tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn new(panels_x: usize, panels_y: usize, nodes_per_panel: usize, tol: f64) -> Result<Self> {
        if panels_x == 0 || panels_y == 0 || nodes_per_panel == 0 {
            return Err(domain("quadrature counts must be positive"));
        }
        if !(tol > 0.0) {
            return Err(domain("quadrature tolerance must be positive"));
        }
        Ok(Self {
            panels_x,
            panels_y,
            nodes_per_panel,
            tol,
        })
    }
}

/// `L^2` norm against `dx dy / y^2` and `sup |dF/dy|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionNorms {
    pub l2_gamma: f64,
    pub sobolev_1_inf: f64,
}

/// Collects the first error raised inside a quadrature callback.
struct ErrorSlot(RefCell<Option<Error>>);

impl ErrorSlot {
    fn new() -> Self {
        Self(RefCell::new(None))
    }

    fn catch(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    fn finish<T>(self, value: T) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }
}

/// `int_0^1 F(reduce(x + i y)) dx`.
pub fn horocycle_average_at_height(f: &BumpTestFunction, y: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(y > 0.0) {
        return Err(domain(format!("height must be positive, got {y}")));
    }
    let slot = ErrorSlot::new();
    let v = doubling(
        0.0,
        1.0,
        q.panels_x,
        q.nodes_per_panel,
        q.tol,
        MAX_HOROCYCLE_PANELS,
        |x| slot.catch(f.value(&UpperHalfPoint { x, y })),
    )?;
    slot.finish(v)
}

/// Average of `F` over the closed horocycle at height `1/T`.
pub fn horocycle_average(f: &BumpTestFunction, t: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(domain(format!("T must be >= 1, got {t}")));
    }
    horocycle_average_at_height(f, 1.0 / t, q)
}

fn check_kernel(k: &ThickKernel) -> Result<()> {
    if k.n() != 1 {
        return Err(domain("the modular surface needs a kernel with n = 1"));
    }
    Ok(())
}

/// `int psi(y) (int_0^1 F(x + i y) dx) dy / y^2`.
pub fn thickened_average_unfolded(
    f: &BumpTestFunction,
    k: &ThickKernel,
    q: &QuadratureSpec,
) -> Result<f64> {
    check_kernel(k)?;
    let (lo, hi) = k.support();
    let slot = ErrorSlot::new();
    let v = doubling(lo, hi, 1, 8, q.tol, 256, |y| {
        slot.catch(horocycle_average_at_height(f, y, q)) / (y * y)
    })?;
    slot.finish(k.height() * v)
}

/// Contribution of one coset to the folded thickened average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetContribution {
    pub coset: Coset,
    pub value: f64,
}

/// Region of the support box mapped into the kernel window by one coset.
enum Region {
    /// Horizontal strip `y in [lo, hi]`.
    Strip { lo: f64, hi: f64 },
    /// Points between two horocycle circles tangent to the real axis at `x0`.
    Crescent { x0: f64, r_in: f64, r_out: f64 },
}

impl Region {
    fn for_coset(coset: Coset, k: &ThickKernel) -> Self {
        let (lo, hi) = k.support();
        if coset.c == 0 {
            Region::Strip { lo, hi }
        } else {
            let c2 = (coset.c * coset.c) as f64;
            Region::Crescent {
                x0: -(coset.d as f64) / coset.c as f64,
                r_in: 0.5 / (c2 * hi),
                r_out: 0.5 / (c2 * lo),
            }
        }
    }

    /// Sub-intervals of the x-range with no interior kinks.
    fn x_pieces(&self, b: &SupportBox) -> Vec<(f64, f64)> {
        let mut cuts = match *self {
            Region::Strip { .. } => vec![b.x_min, b.x_max],
            Region::Crescent { x0, r_in, r_out } => {
                let a = b.x_min.max(x0 - r_out);
                let e = b.x_max.min(x0 + r_out);
                if a >= e {
                    return Vec::new();
                }
                let mut v = vec![a, e];
                for p in [x0 - r_in, x0 + r_in] {
                    if p > a && p < e {
                        v.push(p);
                    }
                }
                v
            }
        };
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// y-intervals of the region above `x`, up to two.
    fn y_intervals(&self, x: f64) -> [(f64, f64); 2] {
        const EMPTY: (f64, f64) = (0.0, 0.0);
        match *self {
            Region::Strip { lo, hi } => [(lo, hi), EMPTY],
            Region::Crescent { x0, r_in, r_out } => {
                let u = x - x0;
                let so = (r_out * r_out - u * u).max(0.0).sqrt();
                if u.abs() >= r_in {
                    [(r_out - so, r_out + so), EMPTY]
                } else {
                    let si = (r_in * r_in - u * u).max(0.0).sqrt();
                    [(r_out - so, r_in - si), (r_in + si, r_out + so)]
                }
            }
        }
    }
}

fn region_integral(
    f: &BumpTestFunction,
    region: &Region,
    panels_x: usize,
    panels_y: usize,
    rule: &GaussLegendre,
) -> f64 {
    let b = f.support_box();
    let mut total = 0.0;
    for (a, e) in region.x_pieces(&b) {
        // x = a + (e - a)(1 - cos th)/2 absorbs the square-root edges.
        let half = 0.5 * (e - a);
        total += rule.composite(0.0, PI, panels_x, |th| {
            let x = a + half * (1.0 - th.cos());
            let jac = half * th.sin();
            let mut inner = 0.0;
            for (lo, hi) in region.y_intervals(x) {
                let lo = lo.max(b.y_min);
                let hi = hi.min(b.y_max);
                if hi > lo {
                    inner += rule.composite(lo, hi, panels_y, |y| f.value_reduced(x, y) / (y * y));
                }
            }
            inner * jac
        });
    }
    total
}

fn candidate_cosets(f: &BumpTestFunction, k: &ThickKernel) -> Result<Vec<Coset>> {
    let b = f.support_box();
    let (lo, hi) = k.support();
    let mut out = Vec::new();
    if hi > b.y_min && lo < b.y_max {
        out.push(Coset { c: 0, d: 1 });
    }
    // The outer circle has height 1/(c^2 y_lo) and must reach the box.
    let c_max = (1.0 / (b.y_min * lo)).sqrt().floor();
    if c_max > 1e6 {
        return Err(Error::Capacity(format!("c ranges up to {c_max:e}")));
    }
    for c in 1..=c_max as i64 {
        let cf = c as f64;
        let r_out = 0.5 / (cf * cf * lo);
        let d_lo = (-cf * (b.x_max + r_out)).ceil() as i64;
        let d_hi = (-cf * (b.x_min - r_out)).floor() as i64;
        for d in d_lo..=d_hi {
            if gcd(c, d) == 1 {
                out.push(Coset { c, d });
            }
        }
    }
    Ok(out)
}

/// Per-coset terms of the folded average; cosets whose region misses the
/// support of `F` are omitted.
pub fn folded_coset_contributions(
    f: &BumpTestFunction,
    k: &ThickKernel,
    q: &QuadratureSpec,
) -> Result<Vec<CosetContribution>> {
    check_kernel(k)?;
    let rule = GaussLegendre::cached(q.nodes_per_panel);
    let mut out = Vec::new();
    for coset in candidate_cosets(f, k)? {
        let region = Region::for_coset(coset, k);
        let mut px = (q.panels_x / 4).max(1);
        let mut py = (q.panels_y / 4).max(1);
        let mut prev = region_integral(f, &region, px, py, rule);
        let mut change = f64::INFINITY;
        for _ in 0..6 {
            px *= 2;
            py *= 2;
            let next = region_integral(f, &region, px, py, rule);
            change = relative_change(next, prev);
            prev = next;
            if change <= q.tol {
                break;
            }
        }
        if change > q.tol {
            return Err(Error::Quadrature {
                tol: q.tol,
                achieved: change,
            });
        }
        let value = k.height() * prev;
        if value != 0.0 {
            out.push(CosetContribution { coset, value });
        }
    }
    Ok(out)
}

/// `int_{fundamental domain} F Psi dx dy / y^2`, where `Psi` is the
/// automorphized kernel, computed coset by coset over the support of `F`.
pub fn thickened_average_folded(
    f: &BumpTestFunction,
    k: &ThickKernel,
    q: &QuadratureSpec,
) -> Result<f64> {
    Ok(folded_coset_contributions(f, k, q)?
        .iter()
        .map(|c| c.value)
        .sum())
}

fn box_integral(f: &BumpTestFunction, g: impl Fn(f64, f64) -> f64, tol: f64) -> Result<f64> {
    let b = f.support_box();
    let slot = ErrorSlot::new();
    let v = adaptive(b.x_min, b.x_max, tol, |x| {
        slot.catch(adaptive(b.y_min, b.y_max, tol, |y| g(x, y)))
    })?;
    slot.finish(v)
}

/// `(3/pi) int F dx dy / y^2`, the average of `F` against the normalized
/// hyperbolic area of the modular surface.
pub fn hyperbolic_average(f: &BumpTestFunction) -> Result<f64> {
    if f.amplitude() == 0.0 {
        return Ok(0.0);
    }
    let b = f.support_box();
    let c = f.center();
    let unit = f.with_amplitude(1.0);
    let fx = adaptive(b.x_min, b.x_max, 1e-14, |x| unit.value_reduced(x, c.y))?;
    let fy = adaptive(b.y_min, b.y_max, 1e-14, |y| unit.value_reduced(c.x, y) / (y * y))?;
    Ok(3.0 / PI * f.amplitude() * fx * fy)
}

pub fn norms(f: &BumpTestFunction, q: &QuadratureSpec) -> Result<FunctionNorms> {
    if f.amplitude() == 0.0 {
        return Ok(FunctionNorms {
            l2_gamma: 0.0,
            sobolev_1_inf: 0.0,
        });
    }
    let l2 = box_integral(
        f,
        |x, y| {
            let v = f.value_reduced(x, y);
            v * v / (y * y)
        },
        q.tol.min(1e-10),
    )?
    .sqrt();
    let b = f.support_box();
    let grid = 400;
    let mut sup: f64 = 0.0;
    for i in 0..grid {
        let x = b.x_min + (b.x_max - b.x_min) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let y = b.y_min + (b.y_max - b.y_min) * j as f64 / (grid - 1) as f64;
            sup = sup.max(f.dy_reduced(x, y).abs());
        }
    }
    Ok(FunctionNorms {
        l2_gamma: l2,
        sobolev_1_inf: sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horocycle_at_height_one_misses_high_support() {
        let f = BumpTestFunction::new(UpperHalfPoint { x: 0.0, y: 2.5 }, 0.3, 0.5, 1.0).unwrap();
        let q = QuadratureSpec::default();
        assert_eq!(horocycle_average(&f, 1.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn zero_function() {
        let f = BumpTestFunction::default_bump().with_amplitude(0.0);
        let q = QuadratureSpec::default();
        assert_eq!(horocycle_average(&f, 7.0, &q).unwrap(), 0.0);
        assert_eq!(hyperbolic_average(&f).unwrap(), 0.0);
        let n = norms(&f, &q).unwrap();
        assert_eq!((n.l2_gamma, n.sobolev_1_inf), (0.0, 0.0));
    }

    #[test]
    fn hyperbolic_average_matches_box_quadrature() {
        let f = BumpTestFunction::default_bump();
        let direct = 3.0 / PI * box_integral(&f, |x, y| f.value_reduced(x, y) / (y * y), 1e-12).unwrap();
        let h = hyperbolic_average(&f).unwrap();
        assert!((h - direct).abs() < 1e-11 * h);
    }

    #[test]
    fn strip_region_single_interval() {
        let r = Region::Strip { lo: 1.0, hi: 2.0 };
        assert_eq!(r.y_intervals(0.3)[0], (1.0, 2.0));
    }

    #[test]
    fn crescent_geometry() {
        let r = Region::Crescent {
            x0: 0.0,
            r_in: 1.0,
            r_out: 2.0,
        };
        let [(a, b), (c, d)] = r.y_intervals(0.0);
        assert!((a - 0.0).abs() < 1e-15 && (b - 0.0).abs() < 1e-15);
        assert!((c - 2.0).abs() < 1e-15 && (d - 4.0).abs() < 1e-15);
        let [(a, b), _] = r.y_intervals(1.5);
        assert!((a - (2.0 - 1.75f64.sqrt())).abs() < 1e-15);
        assert!((b - (2.0 + 1.75f64.sqrt())).abs() < 1e-15);
    }
}
