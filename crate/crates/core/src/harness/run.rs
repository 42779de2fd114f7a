use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{EpsPolicy, ExperimentConfig, ExperimentKind};
use super::report::{fit_slope_from, FitReport, ResultRow, T_FLOOR_SLACK};
use crate::error::{Error, Result};
use crate::modular::{
    horocycle_average, hyperbolic_average, norms, thickened_average_folded,
    thickened_average_unfolded, BumpTestFunction, FunctionNorms,
};
use crate::rank_one::{
    epsilon_optimizer_rank1, homogeneous_interpolation_residual, FunctionClass, SpectralPoint,
    ThickKernel,
};
use crate::sl3::{lambda_from_nu, m_t, nu_orbit, NuPair};
use crate::sln::{b_table, epsilon_optimizer_sln, i_cont, m_t_general};

/// Slope the horocycle error must beat.
pub const DECAY_SLOPE_THRESHOLD: f64 = -1.0 / 3.0 + 0.05;
pub const FOLD_TOLERANCE: f64 = 1e-6;
pub const INTERPOLATION_TOLERANCE: f64 = 1e-10;
pub const ORBIT_TOLERANCE: f64 = 1e-9;
pub const BALANCE_TOLERANCE: f64 = 1e-12;

const SEED: u64 = 0x5eed_7ab1e;
const DRAWS_PER_ROW: usize = 25;

/// A named pass/fail verdict attached to a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub kind: ExperimentKind,
    pub rows: Vec<ResultRow>,
    pub fit: Option<FitReport>,
    pub checks: Vec<Check>,
}

impl RunOutput {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.fit.is_none_or(|f| f.pass)
    }
}

struct Shared {
    bump: BumpTestFunction,
    norms: Option<FunctionNorms>,
    reference: f64,
}

fn optimal_eps(t: f64, n: &FunctionNorms) -> Result<f64> {
    let c = epsilon_optimizer_rank1(1, 1.0, t, n.l2_gamma, n.sobolev_1_inf, FunctionClass::KInvariant)?;
    if !c.asymptotic {
        return Err(Error::Config(format!(
            "paper-optimal eps = {} is not below 1/2 at T = {t}",
            c.eps
        )));
    }
    Ok(c.eps)
}

fn row_eps(cfg: &ExperimentConfig, sh: &Shared, t: f64) -> Result<f64> {
    match cfg.eps_policy {
        EpsPolicy::Fixed(e) => Ok(e),
        EpsPolicy::PaperOptimal => optimal_eps(t, sh.norms.as_ref().expect("norms computed")),
    }
}

fn horocycle_row(cfg: &ExperimentConfig, sh: &Shared, t: f64) -> Result<ResultRow> {
    let start = Instant::now();
    let value = horocycle_average(&sh.bump, t, &cfg.quadrature)?;
    let eps = match cfg.eps_policy {
        EpsPolicy::Fixed(e) => Some(e),
        EpsPolicy::PaperOptimal => row_eps(cfg, sh, t).ok(),
    };
    Ok(ResultRow::new(vec![t], value, sh.reference, eps, ms(start)))
}

fn fold_row(cfg: &ExperimentConfig, sh: &Shared, t: f64) -> Result<(ResultRow, f64)> {
    let start = Instant::now();
    let eps = row_eps(cfg, sh, t)?;
    let k = ThickKernel::new(1, t, eps)?;
    let folded = thickened_average_folded(&sh.bump, &k, &cfg.quadrature)?;
    let unfolded = thickened_average_unfolded(&sh.bump, &k, &cfg.quadrature)?;
    let sharp = horocycle_average(&sh.bump, t, &cfg.quadrature)?;
    let row = ResultRow::new(vec![t], folded, unfolded, Some(eps), ms(start));
    Ok((row, (sharp - unfolded).abs()))
}

fn random_point(rng: &mut ChaCha8Rng) -> Result<SpectralPoint> {
    let n = rng.gen_range(1..=3u32);
    let half = n as f64 / 2.0;
    match rng.gen_range(0..3) {
        0 => SpectralPoint::exceptional(n, rng.gen_range(half + 1e-3..=n as f64)),
        1 => SpectralPoint::tempered(n, 0.0),
        _ => SpectralPoint::tempered(n, rng.gen_range(-20.0..20.0)),
    }
}

fn interpolation_row(cfg: &ExperimentConfig, index: usize, t: f64) -> Result<ResultRow> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ index as u64);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < DRAWS_PER_ROW {
        let point = random_point(&mut rng)?;
        let eps = match cfg.eps_policy {
            EpsPolicy::Fixed(e) => e,
            EpsPolicy::PaperOptimal => rng.gen_range(0.01..0.3),
        };
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let node = rng.gen_range(1.5..4.0);
        match homogeneous_interpolation_residual(a, b, &point, t, node, eps) {
            Ok(r) => {
                worst = worst.max(r);
                done += 1;
            }
            Err(Error::DegenerateNode { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let eps = match cfg.eps_policy {
        EpsPolicy::Fixed(e) => Some(e),
        EpsPolicy::PaperOptimal => None,
    };
    Ok(ResultRow::new(vec![t], worst, 0.0, eps, ms(start)))
}

fn orbit_row(index: usize, t: f64) -> Result<ResultRow> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ index as u64);
    let nu = NuPair::real(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let lp = lambda_from_nu(&nu);
    let orbit = nu_orbit(&lp)?;
    let residual = orbit
        .iter()
        .map(|v| lambda_from_nu(v).distance(&lp))
        .fold(0.0, f64::max);
    let containment = orbit.iter().map(|v| v.distance(&nu)).fold(f64::INFINITY, f64::min);
    let ones = [Complex64::new(1.0, 0.0); 6];
    let direct = m_t(&lp, t, t, &ones)?;
    let tbl = b_table(3)?;
    let general: Vec<Vec<Complex64>> = orbit.iter().map(|v| vec![v.nu1, v.nu2]).collect();
    let via_table = m_t_general(&tbl, &general, &[t, t], &ones)?;
    let mismatch = (direct - via_table).norm() / direct.norm().max(1.0);
    let value = residual.max(containment).max(mismatch);
    Ok(ResultRow::new(vec![t, t], value, 0.0, None, ms(start)))
}

fn sln_table_row(n: usize, t: f64) -> Result<ResultRow> {
    let start = Instant::now();
    let ts = vec![t; n - 1];
    let value = i_cont(n, &ts)?;
    let total = (n * n * (n * n - 1)) as f64 / 12.0;
    let reference = t.powf(total / n as f64);
    Ok(ResultRow::new(ts, value, reference, None, ms(start)))
}

fn budget_rows(sh: &Shared, t: f64) -> Result<Vec<ResultRow>> {
    let nm = sh.norms.as_ref().expect("norms computed");
    let mut out = Vec::new();
    let start = Instant::now();
    let c = epsilon_optimizer_rank1(1, 1.0, t, nm.l2_gamma, nm.sobolev_1_inf, FunctionClass::KInvariant)?;
    out.push(ResultRow::new(vec![t], c.thickening_term, c.spectral_term, Some(c.eps), ms(start)));
    for n in 2..=6 {
        let start = Instant::now();
        let ts = vec![t; n - 1];
        let c = epsilon_optimizer_sln(n, &ts, nm.l2_gamma, nm.sobolev_1_inf)?;
        out.push(ResultRow::new(ts, c.thickening_term, c.spectral_term, Some(c.eps), ms(start)));
    }
    Ok(out)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn label(t: f64) -> String {
    t.to_string()
}

fn collect<T: Send>(
    cfg: &ExperimentConfig,
    ts: &[f64],
    f: impl Fn(usize, f64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<T>> =
        pool.install(|| ts.par_iter().enumerate().map(|(i, &t)| f(i, t)).collect());
    results
        .into_iter()
        .zip(ts)
        .map(|(r, &t)| {
            r.map_err(|e| Error::Row {
                t: label(t),
                source: Box::new(e),
            })
        })
        .collect()
}

fn max_relative(rows: &[ResultRow]) -> f64 {
    rows.iter().map(|r| r.relative_error()).fold(0.0, f64::max)
}

fn tolerance_check(name: &str, worst: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        pass: worst <= tol,
        detail: format!("worst {worst:e} against tolerance {tol:e}"),
    }
}

/// Errors strictly decrease over rows with `T >= t_floor`.
pub fn monotone_after(rows: &[ResultRow], t_floor: f64) -> (bool, Option<f64>) {
    let tail: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| r.t_scalar() >= t_floor * (1.0 - T_FLOOR_SLACK))
        .collect();
    for w in tail.windows(2) {
        if w[1].abs_error >= w[0].abs_error {
            return (false, Some(w[1].t_scalar()));
        }
    }
    (true, None)
}

/// Runs the configured experiment; rows come back sorted by `T` and do
/// not depend on the number of workers.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let ts = cfg.grid.values();
    let bump = cfg.bump.build()?;
    let needs_norms = match cfg.kind {
        ExperimentKind::Budgets | ExperimentKind::FoldUnfold => true,
        ExperimentKind::HorocycleDecay => cfg.eps_policy == EpsPolicy::PaperOptimal,
        _ => false,
    };
    let sh = Shared {
        norms: if needs_norms { Some(norms(&bump, &cfg.quadrature)?) } else { None },
        reference: match cfg.kind {
            ExperimentKind::HorocycleDecay => hyperbolic_average(&bump)?,
            _ => 0.0,
        },
        bump,
    };
    let decade = 10.0 * cfg.grid.t_min;
    let mut fit = None;
    let mut checks = Vec::new();
    let rows = match cfg.kind {
        ExperimentKind::HorocycleDecay => {
            let rows = collect(cfg, &ts, |_, t| horocycle_row(cfg, &sh, t))?;
            fit = Some(fit_slope_from(&rows, decade)?.with_threshold(DECAY_SLOPE_THRESHOLD));
            let (mono, at) = monotone_after(&rows, decade);
            checks.push(Check {
                name: "monotone decay after the first decade".into(),
                pass: mono,
                detail: match at {
                    Some(t) => format!("error increases at T = {t}"),
                    None => "strictly decreasing".into(),
                },
            });
            rows
        }
        ExperimentKind::FoldUnfold => {
            let pairs = collect(cfg, &ts, |_, t| fold_row(cfg, &sh, t))?;
            let bound = 2.0 * sh.norms.as_ref().expect("norms computed").sobolev_1_inf;
            let gap_ok = pairs
                .iter()
                .all(|(r, gap)| *gap <= bound * r.eps.unwrap_or(0.0));
            let rows: Vec<ResultRow> = pairs.into_iter().map(|p| p.0).collect();
            checks.push(tolerance_check("fold/unfold agreement", max_relative(&rows), FOLD_TOLERANCE));
            checks.push(Check {
                name: "thickening gap".into(),
                pass: gap_ok,
                detail: "|M - M_eps| <= 2 eps |F|_{1,inf}".into(),
            });
            rows
        }
        ExperimentKind::InterpolationSuite => {
            let rows = collect(cfg, &ts, |i, t| interpolation_row(cfg, i, t))?;
            let worst = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
            checks.push(tolerance_check("interpolation residual", worst, INTERPOLATION_TOLERANCE));
            rows
        }
        ExperimentKind::Sl3Roots => {
            let rows = collect(cfg, &ts, orbit_row)?;
            let worst = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
            checks.push(tolerance_check("orbit residual", worst, ORBIT_TOLERANCE));
            rows
        }
        ExperimentKind::SlnTables => {
            let nested: Vec<Vec<ResultRow>> =
                collect(cfg, &ts, |_, t| (2..=6).map(|n| sln_table_row(n, t)).collect())?;
            let rows: Vec<ResultRow> = nested.into_iter().flatten().collect();
            checks.push(tolerance_check("I_cont closed form", max_relative(&rows), BALANCE_TOLERANCE));
            rows
        }
        ExperimentKind::Budgets => {
            let nested = collect(cfg, &ts, |_, t| budget_rows(&sh, t))?;
            let rows: Vec<ResultRow> = nested.into_iter().flatten().collect();
            checks.push(tolerance_check("epsilon balance", max_relative(&rows), BALANCE_TOLERANCE));
            rows
        }
    };
    Ok(RunOutput {
        kind: cfg.kind,
        rows,
        fit,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::TGrid;

    fn cfg(kind: ExperimentKind, lo: f64, hi: f64, points: usize) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            grid: TGrid::new(lo, hi, points).unwrap(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn sln_tables_pass() {
        let out = run(&cfg(ExperimentKind::SlnTables, 2.0, 50.0, 4)).unwrap();
        assert_eq!(out.rows.len(), 20);
        assert!(out.pass(), "{:?}", out.checks);
    }

    #[test]
    fn budgets_balance() {
        let out = run(&cfg(ExperimentKind::Budgets, 3.0, 1e3, 3)).unwrap();
        assert!(out.pass(), "{:?}", out.checks);
    }

    #[test]
    fn row_errors_name_the_row() {
        let err = run(&cfg(ExperimentKind::Budgets, 1.0, 10.0, 2)).unwrap_err();
        assert!(matches!(err, Error::Row { ref t, .. } if t == "1"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn monotonicity_detector() {
        let rows: Vec<ResultRow> = [5.0, 3.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, &e)| ResultRow::new(vec![10.0 * (i + 1) as f64], e, 0.0, None, 0.0))
            .collect();
        assert_eq!(monotone_after(&rows, 0.0), (false, Some(30.0)));
        assert_eq!(monotone_after(&rows, 25.0), (true, None));
    }
}
