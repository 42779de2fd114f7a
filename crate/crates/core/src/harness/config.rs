use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modular::{BumpTestFunction, QuadratureSpec, UpperHalfPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    HorocycleDecay,
    FoldUnfold,
    InterpolationSuite,
    Sl3Roots,
    SlnTables,
    Budgets,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::HorocycleDecay => "horocycle-decay",
            Self::FoldUnfold => "fold-unfold",
            Self::InterpolationSuite => "interpolation-suite",
            Self::Sl3Roots => "sl3-roots",
            Self::SlnTables => "sln-tables",
            Self::Budgets => "budgets",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "horocycle-decay" => Self::HorocycleDecay,
            "fold-unfold" => Self::FoldUnfold,
            "interpolation-suite" => Self::InterpolationSuite,
            "sl3-roots" => Self::Sl3Roots,
            "sln-tables" => Self::SlnTables,
            "budgets" => Self::Budgets,
            _ => return Err(Error::Config(format!("unknown experiment kind `{s}`"))),
        })
    }
}

/// Geometric grid `t_min, ..., t_max` with `points` entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl TGrid {
    pub fn new(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_min >= 1.0 && t_min.is_finite()) {
            return Err(Error::Config(format!("t_min must be >= 1, got {t_min}")));
        }
        if !(t_max >= t_min && t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be >= t_min, got {t_max}")));
        }
        if points < 2 {
            return Err(Error::Config(format!("t_points must be >= 2, got {points}")));
        }
        Ok(Self { t_min, t_max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let ratio = (self.t_max / self.t_min).ln() / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| match i {
                0 => self.t_min,
                i if i + 1 == self.points => self.t_max,
                i => self.t_min * (ratio * i as f64).exp(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsPolicy {
    Fixed(f64),
    PaperOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpParams {
    pub center_x: f64,
    pub center_y: f64,
    pub wx: f64,
    pub wy: f64,
    pub amplitude: f64,
}

impl Default for BumpParams {
    fn default() -> Self {
        let b = BumpTestFunction::default_bump();
        let (wx, wy) = b.half_widths();
        Self {
            center_x: b.center().x,
            center_y: b.center().y,
            wx,
            wy,
            amplitude: b.amplitude(),
        }
    }
}

impl BumpParams {
    pub fn build(&self) -> Result<BumpTestFunction> {
        let c = UpperHalfPoint::new(self.center_x, self.center_y)?;
        BumpTestFunction::new(c, self.wx, self.wy, self.amplitude)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub grid: TGrid,
    pub eps_policy: EpsPolicy,
    pub bump: BumpParams,
    pub quadrature: QuadratureSpec,
    pub out: Option<PathBuf>,
    /// Worker threads; `0` means one per core.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::HorocycleDecay,
            grid: TGrid {
                t_min: 10.0,
                t_max: 1e4,
                points: 13,
            },
            eps_policy: EpsPolicy::PaperOptimal,
            bump: BumpParams::default(),
            quadrature: QuadratureSpec::default(),
            out: None,
            workers: 1,
        }
    }
}

const KEYS: [&str; 17] = [
    "kind",
    "t_min",
    "t_max",
    "t_points",
    "eps_policy",
    "eps_value",
    "bump_center_x",
    "bump_center_y",
    "bump_wx",
    "bump_wy",
    "bump_amplitude",
    "quad_panels_x",
    "quad_panels_y",
    "quad_nodes",
    "quad_tol",
    "out",
    "workers",
];

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("cannot parse `{v}` for key `{key}`")))
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment and absent keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let (mut t_min, mut t_max, mut points) = (cfg.grid.t_min, cfg.grid.t_max, cfg.grid.points);
        let (mut px, mut py, mut nodes, mut tol) = (
            cfg.quadrature.panels_x,
            cfg.quadrature.panels_y,
            cfg.quadrature.nodes_per_panel,
            cfg.quadrature.tol,
        );
        let mut policy: Option<String> = None;
        let mut eps_value: Option<f64> = None;
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, v) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if seen.contains(&key) {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            seen.push(key);
            match key {
                "kind" => cfg.kind = v.parse()?,
                "t_min" => t_min = parse_value(key, v)?,
                "t_max" => t_max = parse_value(key, v)?,
                "t_points" => points = parse_value(key, v)?,
                "eps_policy" => policy = Some(v.to_string()),
                "eps_value" => eps_value = Some(parse_value(key, v)?),
                "bump_center_x" => cfg.bump.center_x = parse_value(key, v)?,
                "bump_center_y" => cfg.bump.center_y = parse_value(key, v)?,
                "bump_wx" => cfg.bump.wx = parse_value(key, v)?,
                "bump_wy" => cfg.bump.wy = parse_value(key, v)?,
                "bump_amplitude" => cfg.bump.amplitude = parse_value(key, v)?,
                "quad_panels_x" => px = parse_value(key, v)?,
                "quad_panels_y" => py = parse_value(key, v)?,
                "quad_nodes" => nodes = parse_value(key, v)?,
                "quad_tol" => tol = parse_value(key, v)?,
                "out" => cfg.out = Some(PathBuf::from(v)),
                "workers" => cfg.workers = parse_value(key, v)?,
                _ => unreachable!(),
            }
        }
        cfg.grid = TGrid::new(t_min, t_max, points)?;
        cfg.quadrature =
            QuadratureSpec::new(px, py, nodes, tol).map_err(|e| Error::Config(e.to_string()))?;
        cfg.eps_policy = match (policy.as_deref(), eps_value) {
            (None | Some("paper-optimal"), None) => EpsPolicy::PaperOptimal,
            (None | Some("paper-optimal"), Some(_)) => {
                return Err(Error::Config("eps_value given without eps_policy = fixed".into()))
            }
            (Some("fixed"), Some(e)) => EpsPolicy::Fixed(e),
            (Some("fixed"), None) => {
                return Err(Error::Config("eps_policy = fixed needs eps_value".into()))
            }
            (Some(p), _) => return Err(Error::Config(format!("unknown eps_policy `{p}`"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        TGrid::new(self.grid.t_min, self.grid.t_max, self.grid.points)?;
        if let EpsPolicy::Fixed(e) = self.eps_policy {
            if !(e > 0.0 && e < 0.5) {
                return Err(Error::Config(format!("eps_value must lie in (0, 1/2), got {e}")));
            }
        }
        self.bump.build().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = "# demo\nkind = fold-unfold\nt_min = 3\nt_max = 10\nt_points = 3\n\
                    eps_policy = fixed\neps_value = 0.05 # inline\nworkers = 4\nout = a.csv\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.kind, ExperimentKind::FoldUnfold);
        assert_eq!(c.eps_policy, EpsPolicy::Fixed(0.05));
        assert_eq!(c.workers, 4);
        assert_eq!(c.grid.values().len(), 3);
        assert_eq!(c.grid.values()[2], 10.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("t_points = 1").is_err());
        assert!(ExperimentConfig::parse("t_min = 0.5").is_err());
        assert!(ExperimentConfig::parse("colour = red").is_err());
        assert!(ExperimentConfig::parse("eps_policy = fixed\neps_value = 0.7").is_err());
        assert!(ExperimentConfig::parse("kind = nothing").is_err());
        assert!(ExperimentConfig::parse("t_min = 3\nt_min = 4").is_err());
        assert!(ExperimentConfig::parse("bump_center_y = 0.3").is_err());
    }

    #[test]
    fn geometric_grid() {
        let g = TGrid::new(10.0, 1e4, 13).unwrap().values();
        assert!((g[4] - 100.0).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
