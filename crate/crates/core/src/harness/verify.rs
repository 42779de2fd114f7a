use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{EpsPolicy, ExperimentConfig, ExperimentKind, TGrid};
use super::run::{run, Check};
use crate::error::{Error, Result};
use crate::rank_one::{
    error_exponents_exact, exponent_budget_exact, radial_operator_residual,
    variation_of_parameters, FunctionClass, SpectralPoint,
};
use crate::sl3::{
    build_node_scheme, lambda_from_nu, lambda_from_sr, sr_from_nu, NuPair, DEFAULT_NODES,
};
use crate::sln::{b_table, casimir_n4_monomial, i_cont};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kernel,
    Modular,
    Sl3,
    Sln,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kernel" => Self::Kernel,
            "modular" => Self::Modular,
            "sl3" => Self::Sl3,
            "sln" => Self::Sln,
            "all" => Self::All,
            _ => return Err(Error::Config(format!("unknown suite `{s}`"))),
        })
    }
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn from_run(kind: ExperimentKind, lo: f64, hi: f64, points: usize, eps: EpsPolicy) -> Result<Vec<Check>> {
    let cfg = ExperimentConfig {
        kind,
        grid: TGrid::new(lo, hi, points)?,
        eps_policy: eps,
        workers: 0,
        ..ExperimentConfig::default()
    };
    let out = run(&cfg)?;
    let mut checks = out.checks;
    if let Some(f) = out.fit {
        checks.push(check(
            "log-log slope",
            f.pass,
            format!("slope {:.4} (r2 {:.3})", f.slope, f.r2),
        ));
    }
    Ok(checks)
}

fn kernel_checks() -> Result<Vec<Check>> {
    let mut out = from_run(ExperimentKind::InterpolationSuite, 1.5, 1e3, 8, EpsPolicy::PaperOptimal)?;
    let b = exponent_budget_exact(2, Rational64::new(3, 2), Rational64::new(5, 4))?;
    out.push(check(
        "rank-two exponent (delta - s1)/2",
        b.eta_s1 == Rational64::new(1, 8),
        format!("eta_s1 = {}", b.eta_s1),
    ));
    let (_, err, logp) = error_exponents_exact(1, Rational64::from_integer(1), FunctionClass::KInvariant);
    out.push(check(
        "rank-one total exponent",
        err == Rational64::new(-1, 3) && logp == Rational64::new(2, 3),
        format!("T^{err} (log T)^{logp}"),
    ));
    let mut worst: f64 = 0.0;
    for point in [
        SpectralPoint::tempered(2, 0.0)?,
        SpectralPoint::tempered(1, 3.0)?,
        SpectralPoint::exceptional(3, 2.4)?,
    ] {
        let g = |y: f64| (-(y - 2.0).powi(2)).exp();
        let sol = variation_of_parameters(point, g, 0.5, 5.0)?;
        for &y in &[0.8, 1.6, 2.5, 4.1] {
            worst = worst.max(radial_operator_residual(&point, |x| sol.eval(x), g, y, 1e-4)?.abs());
        }
    }
    out.push(check("ODE reconstruction", worst <= 1e-6, format!("worst {worst:e}")));
    Ok(out)
}

fn sl3_checks() -> Result<Vec<Check>> {
    let mut out = from_run(ExperimentKind::Sl3Roots, 2.0, 20.0, 6, EpsPolicy::PaperOptimal)?;
    let base = NuPair::real(1.0 / 3.0, 1.0 / 3.0);
    let a = lambda_from_nu(&base);
    let b = lambda_from_sr(&sr_from_nu(&base));
    let target = crate::sl3::LambdaPair::real(1.0, 0.0);
    out.push(check(
        "tempered base lambda",
        a.distance(&target) < 1e-12 && b.distance(&target) < 1e-12,
        format!(
            "nu form ({}, {}), sr form ({}, {})",
            a.lambda1.re, a.lambda2.re, b.lambda1.re, b.lambda2.re
        ),
    ));
    let lp = lambda_from_nu(&NuPair::real(0.15, 0.4));
    let scheme = build_node_scheme(&lp, &DEFAULT_NODES, 0.05)?;
    out.push(check(
        "default node conditioning",
        scheme.condition() < 1e12,
        format!("condition {:e}", scheme.condition()),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (t1, t2) = (rng.gen_range(1.5..8.0), rng.gen_range(1.5..8.0));
        let c: [Complex64; 6] =
            std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let direct = scheme.mixture_moment(&c, t1, t2)?;
        let w = scheme.weights(t1, t2)?;
        let mut via = Complex64::new(0.0, 0.0);
        for (j, node) in DEFAULT_NODES.iter().enumerate() {
            via += w[j] * scheme.mixture_moment(&c, node.0, node.1)?;
        }
        worst = worst.max((direct - via).norm() / direct.norm().max(1e-300));
    }
    out.push(check("node-scheme exactness", worst <= 1e-8, format!("worst {worst:e}")));
    Ok(out)
}

fn sln_checks() -> Result<Vec<Check>> {
    let mut out = from_run(ExperimentKind::SlnTables, 2.0, 100.0, 4, EpsPolicy::PaperOptimal)?;
    out.extend(from_run(ExperimentKind::Budgets, 3.0, 1e4, 4, EpsPolicy::PaperOptimal)?);
    let mut sym = true;
    for n in 2..=12 {
        let t = b_table(n)?;
        for i in 1..n {
            for j in 1..n {
                sym &= t.get(i, j) == t.get(j, i) && t.get(i, j) > 0;
                if i + j == n {
                    sym &= (i * j) as i64 == ((n - i) * (n - j)) as i64;
                }
            }
        }
    }
    out.push(check("b-table symmetry", sym, "n in 2..=12".into()));
    let one = [Complex64::new(1.0, 0.0); 3];
    let frozen = [
        casimir_n4_monomial(1, &one)?,
        casimir_n4_monomial(2, &one)?,
        casimir_n4_monomial(3, &one)?,
    ];
    out.push(check(
        "n = 4 Casimir constants",
        frozen == [(-2.0).into(), (-8.0).into(), (-6.0).into()],
        format!("{}, {}, {}", frozen[0].re, frozen[1].re, frozen[2].re),
    ));
    let ic = i_cont(3, &[7.0, 11.0])?;
    out.push(check("I_cont(3) = T1 T2", (ic - 77.0).abs() < 1e-12, format!("{ic}")));
    Ok(out)
}

fn modular_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for eps in [0.02, 0.05, 0.1] {
        for c in from_run(ExperimentKind::FoldUnfold, 3.0, 10.0, 3, EpsPolicy::Fixed(eps))? {
            out.push(Check {
                name: format!("{} (eps = {eps})", c.name),
                ..c
            });
        }
    }
    Ok(out)
}

/// Runs a fast self-check suite and returns one verdict per check.
pub fn verify(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Kernel => kernel_checks()?,
        Suite::Modular => modular_checks()?,
        Suite::Sl3 => sl3_checks()?,
        Suite::Sln => sln_checks()?,
        Suite::All => {
            let mut all = kernel_checks()?;
            all.extend(modular_checks()?);
            all.extend(sl3_checks()?);
            all.extend(sln_checks()?);
            all
        }
    })
}
