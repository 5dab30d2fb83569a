//! Parameter sweeps over `μη` and the search for the generation optimum.

use std::fmt::Write as _;

use crate::detection::{analytic_outcomes, DetectorPair};
use crate::error::{check_positive, Error, Result};
use crate::exec::Executor;
use crate::fock::{coincidence_contrast_for, SourceModel, TruncationPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub mu_eta_min: f64,
    pub mu_eta_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub sources: Vec<SourceModel>,
    pub policy: TruncationPolicy,
}

impl Default for SweepSpec {
    /// 60 logarithmic points over `[0.05, 20]` for the single-WCS and
    /// indistinguishable-pair sources.
    fn default() -> Self {
        Self {
            mu_eta_min: 0.05,
            mu_eta_max: 20.0,
            points: 60,
            spacing: Spacing::Logarithmic,
            sources: vec![SourceModel::single(), SourceModel::indistinguishable()],
            policy: TruncationPolicy::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_positive("mu_eta_min", self.mu_eta_min)?;
        if !(self.mu_eta_min < self.mu_eta_max) || !self.mu_eta_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sweep range [{}, {}] is empty",
                self.mu_eta_min, self.mu_eta_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidParameter(
                "a sweep needs at least 2 points".into(),
            ));
        }
        if self.sources.is_empty() {
            return Err(Error::InvalidParameter(
                "a sweep needs at least one source".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        grid(self.mu_eta_min, self.mu_eta_max, self.points, self.spacing)
    }
}

fn grid(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => lo + t * (hi - lo),
                Spacing::Logarithmic => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepValues {
    pub p_gen: f64,
    pub p_disc: f64,
    pub p_none: f64,
    pub contrast: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub mu_eta: f64,
    pub source: SourceModel,
    /// Error text when this grid point could not be evaluated.
    pub values: std::result::Result<SweepValues, String>,
}

/// Analytic evaluation at one operating point, with loss folded into `μη`.
pub fn evaluate_point(
    source: SourceModel,
    mu_eta: f64,
    policy: TruncationPolicy,
) -> Result<SweepValues> {
    let o = analytic_outcomes(source, mu_eta, DetectorPair::ideal(), policy)?;
    let contrast = coincidence_contrast_for(source, mu_eta, DetectorPair::ideal())?;
    Ok(SweepValues {
        p_gen: o.p_gen,
        p_disc: o.p_disc,
        p_none: o.p_none,
        contrast,
    })
}

/// One row per (grid point, source), grid-major.
pub fn sweep(spec: &SweepSpec, executor: Executor) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let jobs: Vec<(f64, SourceModel)> = spec
        .grid()
        .into_iter()
        .flat_map(|x| spec.sources.iter().map(move |s| (x, *s)))
        .collect();
    Ok(executor.map(jobs, |(mu_eta, source)| SweepRow {
        mu_eta,
        source,
        values: evaluate_point(source, mu_eta, spec.policy).map_err(|e| e.to_string()),
    }))
}

/// `x` with nine significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

pub const SWEEP_CSV_HEADER: &str = "mu_eta,source,p_gen,p_disc,p_none,contrast";

/// Comma-separated table; failed rows carry `NaN` values preceded by a
/// `# error` comment line.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for row in rows {
        match &row.values {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    format_sig9(row.mu_eta),
                    row.source,
                    format_sig9(v.p_gen),
                    format_sig9(v.p_disc),
                    format_sig9(v.p_none),
                    format_sig9(v.contrast)
                );
            }
            Err(e) => {
                let _ = writeln!(
                    out,
                    "# error at mu_eta={} source={}: {e}",
                    format_sig9(row.mu_eta),
                    row.source
                );
                let _ = writeln!(
                    out,
                    "{},{},NaN,NaN,NaN,NaN",
                    format_sig9(row.mu_eta),
                    row.source
                );
            }
        }
    }
    out
}

pub fn sweep_to_text(rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{:>12} {:>10} {:>12} {:>12} {:>12} {:>12}\n",
        "mu_eta", "source", "p_gen", "p_disc", "p_none", "contrast"
    );
    for row in rows {
        match &row.values {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "{:>12.6} {:>10} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                    row.mu_eta,
                    row.source.to_string(),
                    v.p_gen,
                    v.p_disc,
                    v.p_none,
                    v.contrast
                );
            }
            Err(e) => {
                let _ = writeln!(
                    out,
                    "{:>12.6} {:>10}  error: {e}",
                    row.mu_eta,
                    row.source.to_string()
                );
            }
        }
    }
    out
}

/// Parses a table written by [`sweep_to_csv`].
pub fn sweep_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(SWEEP_CSV_HEADER) {
        return Err(Error::Format(
            "not a sweep table (unexpected header)".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut pending_error: Option<String> = None;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            pending_error = comment.split_once(": ").map(|(_, e)| e.to_string());
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Format(format!(
                "sweep row '{line}' does not have 6 columns"
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("bad number '{s}' in sweep row")))
        };
        let mu_eta = num(f[0])?;
        let source = f[1].parse()?;
        let values = match pending_error.take() {
            Some(e) => Err(e),
            None => Ok(SweepValues {
                p_gen: num(f[2])?,
                p_disc: num(f[3])?,
                p_none: num(f[4])?,
                contrast: num(f[5])?,
            }),
        };
        rows.push(SweepRow {
            mu_eta,
            source,
            values,
        });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub mu_eta: f64,
    pub p_gen: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimumOptions {
    pub policy: TruncationPolicy,
    /// Width of the final golden-section bracket in `μη`.
    pub tolerance: f64,
    pub prescan_points: usize,
}

impl Default for OptimumOptions {
    fn default() -> Self {
        Self {
            policy: TruncationPolicy::default(),
            tolerance: 1e-4,
            prescan_points: 41,
        }
    }
}

pub const DEFAULT_BRACKET: (f64, f64) = (0.05, 20.0);

/// Maximises `P_gen(μη)` over `bracket`.
pub fn find_optimum(source: SourceModel, bracket: (f64, f64)) -> Result<Optimum> {
    find_optimum_with(source, bracket, OptimumOptions::default())
}

pub fn find_optimum_with(
    source: SourceModel,
    bracket: (f64, f64),
    opts: OptimumOptions,
) -> Result<Optimum> {
    let (lo, hi) = bracket;
    check_positive("bracket lower end", lo)?;
    if !(lo < hi) || !hi.is_finite() {
        return Err(Error::Bracket { lo, hi });
    }
    let p_gen = |x: f64| -> Result<f64> {
        Ok(analytic_outcomes(source, x, DetectorPair::ideal(), opts.policy)?.p_gen)
    };

    // coarse pre-scan: the peak must be interior and the profile unimodal
    let xs = grid(lo, hi, opts.prescan_points.max(5), Spacing::Logarithmic);
    let ys = xs.iter().map(|&x| p_gen(x)).collect::<Result<Vec<_>>>()?;
    let peak = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    const SLACK: f64 = 1e-9;
    let rising = ys[..=peak].windows(2).all(|w| w[1] >= w[0] - SLACK);
    let falling = ys[peak..].windows(2).all(|w| w[1] <= w[0] + SLACK);
    if peak == 0 || peak == xs.len() - 1 || !rising || !falling {
        return Err(Error::Bracket { lo, hi });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[peak - 1], xs[peak + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = p_gen(c)?;
    let mut fd = p_gen(d)?;
    while b - a > opts.tolerance {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = p_gen(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = p_gen(d)?;
        }
    }
    let mu_eta = 0.5 * (a + b);
    Ok(Optimum {
        mu_eta,
        p_gen: p_gen(mu_eta)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        let g = grid(1.0, 100.0, 3, Spacing::Logarithmic);
        assert!((g[1] - 10.0).abs() < 1e-12);
        let g = grid(0.0, 1.0, 5, Spacing::Linear);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn spec_validation() {
        let mut s = SweepSpec::default();
        assert!(s.validate().is_ok());
        s.points = 1;
        assert!(s.validate().is_err());
        let s = SweepSpec {
            mu_eta_min: 2.0,
            mu_eta_max: 1.0,
            ..SweepSpec::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.5), "0.500000000");
        assert_eq!(format_sig9(1.386294361), "1.38629436");
        assert_eq!(format_sig9(20.0), "20.0000000");
        assert_eq!(format_sig9(1.5e-7), "1.50000000e-7");
        assert_eq!(format_sig9(0.0), "0");
    }

    #[test]
    fn sweep_reference_points() {
        let spec = SweepSpec {
            mu_eta_min: 2.0 * std::f64::consts::LN_2,
            mu_eta_max: 20.0,
            points: 2,
            spacing: Spacing::Linear,
            ..SweepSpec::default()
        };
        let rows = sweep(&spec, Executor::Sequential).unwrap();
        assert_eq!(rows.len(), 4);
        let single = rows[0].values.as_ref().unwrap();
        assert!((single.p_gen - 0.5).abs() < 1e-3);
        // at μη = 20 the single WCS saturates; the interfering pair keeps a
        // dark-port tail from its random relative phase
        assert!(rows[2].values.as_ref().unwrap().p_disc >= 0.95);
        let indist = rows[3].values.as_ref().unwrap().p_disc;
        assert!((indist - 0.744_333_3).abs() < 1.1e-3, "{indist}");
        assert_eq!(rows, sweep(&spec, Executor::Parallel).unwrap());
    }

    #[test]
    fn csv_round_trip_keeps_errors() {
        let spec = SweepSpec {
            mu_eta_min: 1.0,
            mu_eta_max: 80.0,
            points: 2,
            spacing: Spacing::Linear,
            sources: vec![SourceModel::indistinguishable()],
            policy: TruncationPolicy::default(),
        };
        let rows = sweep(&spec, Executor::Sequential).unwrap();
        assert!(rows[0].values.is_ok());
        assert!(rows[1].values.is_err());
        let csv = sweep_to_csv(&rows);
        assert!(csv.contains("# error"));
        let back = sweep_from_csv(&csv).unwrap();
        assert_eq!(back.len(), 2);
        assert!(back[1].values.is_err());
        assert!(sweep_to_text(&back).contains("error"));
    }

    #[test]
    fn optimum_rejects_bad_bracket() {
        // peak at 2 ln 2 lies left of this bracket
        assert!(matches!(
            find_optimum(SourceModel::single(), (3.0, 10.0)),
            Err(Error::Bracket { .. })
        ));
        assert!(find_optimum(SourceModel::single(), (2.0, 1.0)).is_err());
    }

    #[test]
    fn single_optimum_closed_form() {
        let o = find_optimum(SourceModel::single(), DEFAULT_BRACKET).unwrap();
        assert!(
            (o.mu_eta - 2.0 * std::f64::consts::LN_2).abs() < 1e-3,
            "{o:?}"
        );
        assert!((o.p_gen - 0.5).abs() < 1e-4);
    }
}
