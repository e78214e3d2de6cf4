//! Experiment configuration, sup-error measurement, convergence tables and the self-test.

mod config;
mod convergence;
mod selftest;

use thiserror::Error;

pub use config::{ConfigError, ControlsConfig, ExperimentConfig, FunctionDescriptor};
pub use convergence::{render_svg, run_convergence, ConvergenceRow, ConvergenceTable, CSV_HEADER};
pub use selftest::{selftest, SelftestOptions, SelftestSummary, SuiteResult};

use crate::approx::{
    grid_max, theorem1_pipeline, theorem2_pipeline, ApproximationReport, ArnoldiPolynomial, Evaluate, PipelineControls,
    VerificationGrid,
};
use crate::domain::{validate_domain, DomainSpec, ValidationReport};
use crate::error::Error;
use crate::function::{evaluate_bar, evaluate_chordal, BarFunction, ChordalFunction};
use crate::metric::{bar_distance, chordal_distance, MetricKind};

/// Boundary samples used to certify a configured domain before any pipeline runs.
pub const VALIDATION_SAMPLES: usize = 4096;

/// Environment fallback for `--jobs`.
pub const JOBS_ENV: &str = "SPHERE_MERGELYAN_JOBS";

/// Approximation target of either theorem.
#[derive(Debug, Clone)]
pub enum Target {
    Chordal(ChordalFunction),
    Bar(BarFunction),
}

impl Target {
    pub fn metric(&self) -> MetricKind {
        match self {
            Self::Chordal(_) => MetricKind::Chordal,
            Self::Bar(_) => MetricKind::Bar,
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("domain rejected: {failures}")]
    DomainRejected { report: ValidationReport, failures: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit status: 1 configuration, 2 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 1,
            Self::Numerical(_) | Self::DomainRejected { .. } => 2,
        }
    }
}

/// Validates `spec` with [`VALIDATION_SAMPLES`] boundary samples.
pub fn certify_domain(spec: &DomainSpec) -> Result<ValidationReport, HarnessError> {
    let report = validate_domain(spec, VALIDATION_SAMPLES)?;
    if report.passed() {
        Ok(report)
    } else {
        let failures = serde_json::to_string(&report.failures).unwrap_or_default();
        Err(HarnessError::DomainRejected { report, failures })
    }
}

/// sup over the verification grid of the metric gap between `q(w)` and `g(w)`.
///
/// `g` is evaluated from `w` alone, inverting the Riemann map numerically, so
/// this is independent of the preimages the pipelines carry along.
pub fn sup_error(g: &Target, q: &dyn Evaluate, grid: &VerificationGrid, metric: MetricKind) -> Result<f64, Error> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty verification grid".into()));
    }
    if g.metric() != metric {
        return Err(Error::InvalidParameter(format!(
            "target takes values for metric {}, not {metric}",
            g.metric()
        )));
    }
    match g {
        Target::Chordal(g) => grid_max(grid.len(), |i| {
            let w = grid.domain[i];
            Ok(chordal_distance(q.eval(w).into(), evaluate_chordal(g, w)?))
        }),
        Target::Bar(g) => grid_max(grid.len(), |i| {
            let w = grid.domain[i];
            Ok(bar_distance(q.eval(w).into(), evaluate_bar(g, w)?))
        }),
    }
}

/// Runs the pipeline matching the target's metric.
pub fn run_pipeline(
    g: &Target,
    spec: &DomainSpec,
    n: usize,
    controls: &PipelineControls,
) -> Result<(ArnoldiPolynomial, ApproximationReport), Error> {
    match g {
        Target::Chordal(g) => theorem1_pipeline(g, spec, n, controls),
        Target::Bar(g) => theorem2_pipeline(g, spec, n, controls),
    }
}
