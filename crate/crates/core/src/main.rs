use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_rational::Rational64;

use horospectral::harness::{emit_report, run, summary_text, verify, ExperimentConfig, Suite};
use horospectral::rank_one::{
    error_exponents_exact, exponent_budget_exact, FunctionClass,
};
use horospectral::sl3::{build_node_scheme, nu_orbit_roots, LambdaPair, DEFAULT_NODES};
use horospectral::sln::{b_table, epsilon_optimizer_sln, i_cont_exponents, kernel_widths, weyl_orbit_size};
use horospectral::{Error, Result};

#[derive(Parser)]
#[command(name = "horospectral", version, about = "Spectral interpolation laboratory for expanding horospheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent budget for dimension n and critical exponent delta.
    Exponents {
        #[arg(long)]
        n: u32,
        /// Decimal or `p/q`.
        #[arg(long)]
        delta: String,
        /// Decimal or `p/q`; defaults to n/2.
        #[arg(long)]
        s1: Option<String>,
    },
    /// Horocycle experiment driven by a config file.
    Horocycle {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fast self-checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// SL(3) spectral parameters.
    Sl3 {
        #[command(subcommand)]
        command: Sl3Command,
    },
    /// SL(n) exponent tables and budgets.
    Sln {
        #[command(subcommand)]
        command: SlnCommand,
    },
}

#[derive(Subcommand)]
enum Sl3Command {
    /// Solve for the six nu with the given Casimir eigenvalues.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        lambda1: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda2: f64,
    },
    /// Six-node interpolation weights at (t1, t2).
    Scheme {
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.9225)]
        lambda1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -0.24625)]
        lambda2: f64,
    },
}

#[derive(Subcommand)]
enum SlnCommand {
    /// Exponent table, growth exponents and kernel widths.
    Table {
        #[arg(long)]
        n: usize,
    },
    /// Balanced thickening for heights T1,T2,...
    Budget {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        norm_gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        norm_1inf: f64,
    },
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Config(format!("cannot parse `{s}` as a rational number"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let num: i64 = all.parse().map_err(|_| bad())?;
    let r = Rational64::new(num, 10i64.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

fn exponents(n: u32, delta: &str, s1: Option<&str>) -> Result<bool> {
    let delta = parse_rational(delta)?;
    let s1 = match s1 {
        Some(v) => parse_rational(v)?,
        None => Rational64::new(n as i64, 2),
    };
    let b = exponent_budget_exact(n, delta, s1)?;
    println!("n = {n}, delta = {delta}, s1 = {s1}");
    println!("P = {}", b.p);
    println!("eta_cont = {}", b.eta_cont);
    println!("eta_s1 = {}", b.eta_s1);
    println!("kernel norm exponent = {}", b.kernel_norm_exp);
    println!("eps exponent = {}", b.eps_exponent);
    for (name, class) in [("general", FunctionClass::General), ("K-invariant", FunctionClass::KInvariant)] {
        let (eps_t, err_t, logp) = error_exponents_exact(n, delta, class);
        println!("{name}: eps ~ T^({eps_t}), error ~ T^({err_t}) (log T)^({logp})");
    }
    Ok(true)
}

fn horocycle(config: &PathBuf) -> Result<bool> {
    let cfg = ExperimentConfig::from_file(config)?;
    let out = run(&cfg)?;
    let pass = out.pass();
    if let Some(path) = &cfg.out {
        emit_report(&out.rows, out.fit.as_ref(), pass, path)?;
    }
    println!("T,value,reference,abs_error");
    for r in &out.rows {
        println!("{},{},{},{:e}", r.t_label(), r.value, r.reference, r.abs_error);
    }
    for c in &out.checks {
        println!("{}: {} ({})", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    print!("{}", summary_text(&out.rows, out.fit.as_ref(), pass));
    Ok(pass)
}

fn verify_cmd(suite: &str) -> Result<bool> {
    let checks = verify(suite.parse::<Suite>()?)?;
    for c in &checks {
        println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.pass))
}

fn sl3(cmd: &Sl3Command) -> Result<bool> {
    match *cmd {
        Sl3Command::Roots { lambda1, lambda2 } => {
            let roots = nu_orbit_roots(&LambdaPair::real(lambda1, lambda2))?;
            println!("nu1,nu2,multiplicity");
            for r in roots {
                println!("{},{},{}", fmt_c(r.nu.nu1), fmt_c(r.nu.nu2), r.multiplicity);
            }
        }
        Sl3Command::Scheme { t1, t2, eps, lambda1, lambda2 } => {
            let scheme = build_node_scheme(&LambdaPair::real(lambda1, lambda2), &DEFAULT_NODES, eps)?;
            println!("condition = {:e}", scheme.condition());
            let w = scheme.weights(t1, t2)?;
            println!("b1,b2,weight");
            for (node, wj) in DEFAULT_NODES.iter().zip(w) {
                println!("{},{},{}", node.0, node.1, fmt_c(wj));
            }
        }
    }
    Ok(true)
}

fn sln(cmd: &SlnCommand) -> Result<bool> {
    match cmd {
        SlnCommand::Table { n } => {
            let n = *n;
            let tbl = b_table(n)?;
            println!("b table (n = {n}):");
            for row in tbl.entries() {
                println!("  {}", row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            }
            let e = i_cont_exponents(n)?;
            println!("I_cont exponents: {}", e.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "));
            let w = kernel_widths(n)?;
            println!("measure exponents: {:?}", w.y_exponents);
            println!("kernel width exponents: {:?}", w.kernel_width_exponents);
            println!("Weyl orbit size: {}", weyl_orbit_size(n)?);
        }
        SlnCommand::Budget { n, t, norm_gamma, norm_1inf } => {
            let c = epsilon_optimizer_sln(*n, t, *norm_gamma, *norm_1inf)?;
            println!("eps = {}", c.eps);
            println!("error exponent = {}", c.error_exponent);
            println!("thickening term = {}", c.thickening_term);
            println!("spectral term = {}", c.spectral_term);
            println!("asymptotic = {}", c.asymptotic);
        }
    }
    Ok(true)
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        z.re.to_string()
    } else {
        format!("{}{:+e}i", z.re, z.im)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Exponents { n, delta, s1 } => exponents(*n, delta, s1.as_deref()),
        Command::Horocycle { config } => horocycle(config),
        Command::Verify { suite } => verify_cmd(suite),
        Command::Sl3 { command } => sl3(command),
        Command::Sln { command } => sln(command),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
