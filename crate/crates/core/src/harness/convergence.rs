use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::{certify_domain, run_pipeline, ExperimentConfig, HarnessError};
use crate::metric::MetricKind;

pub const CSV_HEADER: &str = "degree,disc_stage,mergelyan_stage,total,seconds";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub degree: usize,
    pub disc_stage: f64,
    pub mergelyan_stage: f64,
    pub total: f64,
    pub seconds: f64,
    /// Stage failure for this degree, if any; the numeric columns are then NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub metric: MetricKind,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn failures(&self) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    /// CSV rendering. Wall-clock seconds are written only when `timings` is set;
    /// otherwise the column is left empty so that repeated runs compare equal.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let seconds = if timings {
                format!("{:e}", row.seconds)
            } else {
                String::new()
            };
            if row.error.is_some() {
                let _ = writeln!(out, "{},NaN,NaN,NaN,{seconds}", row.degree);
            } else {
                let _ = writeln!(
                    out,
                    "{},{:e},{:e},{:e},{seconds}",
                    row.degree, row.disc_stage, row.mergelyan_stage, row.total
                );
            }
        }
        out
    }
}

/// Runs the configured pipeline at every degree, in order.
///
/// The domain is certified first; a rejected domain or an unbuildable target
/// aborts the run, while per-degree failures are recorded in their rows.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ConvergenceTable, HarnessError> {
    certify_domain(&config.domain)?;
    let map = config.riemann_map()?;
    let target = config.target(map)?;
    let controls = config.pipeline_controls();
    let rows = config
        .degrees
        .iter()
        .map(|&degree| {
            let start = Instant::now();
            let result = run_pipeline(&target, &config.domain, degree, &controls);
            let seconds = start.elapsed().as_secs_f64();
            match result {
                Ok((_, report)) => ConvergenceRow {
                    degree,
                    disc_stage: report.disc_stage,
                    mergelyan_stage: report.mergelyan_stage,
                    total: report.total,
                    seconds,
                    error: None,
                },
                Err(e) => ConvergenceRow {
                    degree,
                    disc_stage: f64::NAN,
                    mergelyan_stage: f64::NAN,
                    total: f64::NAN,
                    seconds,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(ConvergenceTable {
        metric: config.metric,
        rows,
    })
}

/// Degree against log10 of the total error, as a bare SVG line chart.
pub fn render_svg(table: &ConvergenceTable) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 48.0;
    let points: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.error.is_none() && r.total > 0.0)
        .map(|r| (r.degree as f64, r.total.log10()))
        .collect();
    let mut svg =
        format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n");
    let _ = writeln!(
        svg,
        "<text x=\"{PAD}\" y=\"{}\" font-size=\"12\">degree vs log10 total ({})</text>",
        PAD / 2.0,
        table.metric
    );
    if !points.is_empty() {
        let (x0, x1) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
        let (y0, y1) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0).max(1e-12) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0).max(1e-12) * (H - 2.0 * PAD);
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>",
            coords.join(" ")
        );
        for &(x, y) in &points {
            let _ = writeln!(svg, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>", sx(x), sy(y));
        }
        let _ = writeln!(
            svg,
            "<text x=\"{PAD}\" y=\"{}\" font-size=\"11\">{x0} .. {x1}; log10 total {y0:.2} .. {y1:.2}</text>",
            H - PAD / 3.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(degree: usize, total: f64, error: Option<&str>) -> ConvergenceRow {
        ConvergenceRow {
            degree,
            disc_stage: total,
            mergelyan_stage: 0.0,
            total,
            seconds: 0.25,
            error: error.map(str::to_string),
        }
    }

    #[test]
    fn csv_layout() {
        let table = ConvergenceTable {
            metric: MetricKind::Chordal,
            rows: vec![row(1, 0.5, None), row(2, 0.0, Some("boom"))],
        };
        let csv = table.to_csv(false);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "1,5e-1,0e0,5e-1,");
        assert_eq!(lines[2], "2,NaN,NaN,NaN,");
        assert!(table.to_csv(true).lines().nth(1).unwrap().ends_with(",2.5e-1"));
        assert!(table.has_failures());
    }

    #[test]
    fn svg_is_well_formed() {
        let table = ConvergenceTable {
            metric: MetricKind::Bar,
            rows: vec![row(4, 0.1, None), row(8, 0.01, None)],
        };
        let svg = render_svg(&table);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
    }
}
