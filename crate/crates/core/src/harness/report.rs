use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 6] = ["T", "value", "reference", "abs_error", "eps", "wall_ms"];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// One height for rank one, one per torus coordinate otherwise.
    pub t: Vec<f64>,
    pub value: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub eps: Option<f64>,
    pub wall_ms: f64,
}

impl ResultRow {
    pub fn new(t: Vec<f64>, value: f64, reference: f64, eps: Option<f64>, wall_ms: f64) -> Self {
        Self {
            t,
            value,
            reference,
            abs_error: (value - reference).abs(),
            eps,
            wall_ms,
        }
    }

    /// Product of the heights, used as the abscissa of slope fits.
    pub fn t_scalar(&self) -> f64 {
        self.t.iter().product()
    }

    pub fn t_label(&self) -> String {
        self.t
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn relative_error(&self) -> f64 {
        if self.reference == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.reference.abs()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
    pub threshold: Option<f64>,
    pub pass: bool,
}

impl FitReport {
    /// Marks the fit as passing when `slope <= threshold`.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self.pass = self.slope <= threshold;
        self
    }
}

/// Relative slack when comparing grid heights against a cutoff.
pub(crate) const T_FLOOR_SLACK: f64 = 1e-9;

/// Least squares on `(ln T, ln abs_error)` over rows with `T >= t_floor`
/// (up to rounding of the grid) and positive error.
pub fn fit_slope_from(rows: &[ResultRow], t_floor: f64) -> Result<FitReport> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.t_scalar() >= t_floor * (1.0 - T_FLOOR_SLACK) && r.abs_error > 0.0)
        .map(|r| (r.t_scalar().ln(), r.abs_error.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::NumericDegeneracy(format!(
            "slope fit needs two rows with positive error, got {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::NumericDegeneracy("slope fit needs distinct T".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitReport {
        slope,
        intercept,
        r2,
        points: pts.len(),
        threshold: None,
        pass: true,
    })
}

pub fn fit_slope(rows: &[ResultRow]) -> Result<FitReport> {
    fit_slope_from(rows, f64::NEG_INFINITY)
}

/// `<stem>.summary.txt` next to the CSV.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.txt")
}

pub fn summary_text(rows: &[ResultRow], fit: Option<&FitReport>, pass: bool) -> String {
    let mut s = String::new();
    let max_err = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let _ = writeln!(s, "rows: {}", rows.len());
    let _ = writeln!(s, "max_abs_error: {max_err:e}");
    if let Some(f) = fit {
        let _ = writeln!(s, "slope: {}", f.slope);
        let _ = writeln!(s, "intercept: {}", f.intercept);
        let _ = writeln!(s, "r2: {}", f.r2);
        let _ = writeln!(s, "fit_points: {}", f.points);
        if let Some(t) = f.threshold {
            let _ = writeln!(s, "slope_threshold: {t}");
        }
    }
    let _ = writeln!(s, "result: {}", if pass { "PASS" } else { "FAIL" });
    s
}

pub fn write_csv<W: std::io::Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.t_label(),
            r.value.to_string(),
            r.reference.to_string(),
            r.abs_error.to_string(),
            r.eps.map(|e| e.to_string()).unwrap_or_default(),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV to `path` and the plain-text summary to [`summary_path`].
pub fn emit_report(rows: &[ResultRow], fit: Option<&FitReport>, pass: bool, path: &Path) -> Result<()> {
    write_csv(rows, std::fs::File::create(path)?)?;
    std::fs::write(summary_path(path), summary_text(rows, fit, pass))?;
    Ok(())
}

fn parse_field(field: &str, what: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Config(format!("bad {what} field `{field}`")))
}

pub fn read_report(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(std::fs::File::open(path)?);
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!("unexpected CSV header in {}", path.display())));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let t = rec[0]
            .split('|')
            .map(|v| parse_field(v, "T"))
            .collect::<Result<Vec<_>>>()?;
        rows.push(ResultRow {
            t,
            value: parse_field(&rec[1], "value")?,
            reference: parse_field(&rec[2], "reference")?,
            abs_error: parse_field(&rec[3], "abs_error")?,
            eps: match &rec[4] {
                "" => None,
                e => Some(parse_field(e, "eps")?),
            },
            wall_ms: parse_field(&rec[5], "wall_ms")?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_rows(p: f64) -> Vec<ResultRow> {
        (0..8)
            .map(|i| {
                let t = 10f64.powf(1.0 + 0.4 * i as f64);
                ResultRow::new(vec![t], t.powf(p), 0.0, None, 0.0)
            })
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let f = fit_slope(&power_rows(-0.5)).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_error() {
        let f = fit_slope(&power_rows(0.0)).unwrap();
        assert!(f.slope.abs() < 1e-12);
        assert_eq!(f.r2, 1.0);
    }

    #[test]
    fn floor_and_zero_rows_excluded() {
        let mut rows = power_rows(-1.0);
        rows[0].abs_error = 0.0;
        rows[1].abs_error = 1e9;
        let f = fit_slope_from(&rows, 50.0).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert_eq!(f.points, 6);
        assert!(fit_slope(&rows[..1]).is_err());
    }

    #[test]
    fn threshold() {
        let f = fit_slope(&power_rows(-0.5)).unwrap();
        assert!(f.with_threshold(-0.3).pass);
        assert!(!f.with_threshold(-0.6).pass);
    }

    #[test]
    fn labels() {
        let r = ResultRow::new(vec![3.0, 4.5], 1.0, 0.5, Some(0.1), 1.0);
        assert_eq!(r.t_label(), "3|4.5");
        assert_eq!(r.t_scalar(), 13.5);
        assert_eq!(r.abs_error, 0.5);
    }
}
