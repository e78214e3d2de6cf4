use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sphere_mergelyan::harness::{
    certify_domain, render_svg, run_convergence, run_pipeline, selftest, ExperimentConfig, HarnessError,
    SelftestOptions, JOBS_ENV,
};

const SELFTEST_FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sphere-mergelyan",
    version,
    about = "Polynomial approximation in the chordal and disc-compactification metrics"
)]
struct Cli {
    /// Worker threads for grid evaluation.
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,
    /// Seed for the selftest property suites.
    #[arg(long, global = true, default_value_t = SelftestOptions::default().seed)]
    seed: u64,
    /// Scales χ inside the `χ ≤ |a − b|` selftest suite.
    #[arg(long, hide = true, default_value_t = 1.0)]
    debug_chi_scale: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Metric axioms, embedding isometry, domain fixtures and inversion round trips.
    Selftest {
        /// Random cases per metric suite.
        #[arg(long, default_value_t = SelftestOptions::default().samples)]
        samples: usize,
    },
    /// Certify the configured domain and print the validation report as JSON.
    ValidateDomain { config: PathBuf },
    /// Run one pipeline and print its stage report as JSON.
    Approx {
        config: PathBuf,
        /// Degree to run; defaults to the last configured degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Run every configured degree and write the CSV table.
    Convergence {
        config: PathBuf,
        /// CSV destination, overriding the configured output path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write an SVG chart of degree against log10 total.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Fill the seconds column with wall-clock times.
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if let Command::Selftest { samples } = cli.command {
        return run_selftest(SelftestOptions {
            seed: cli.seed,
            samples,
            chi_scale: cli.debug_chi_scale,
        });
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run_selftest(options: SelftestOptions) -> ExitCode {
    let summary = selftest(&options);
    for suite in &summary.suites {
        let status = if suite.failed == 0 { "ok" } else { "FAILED" };
        println!(
            "{:<40} {status:>6}  passed {:>6}  failed {:>6}",
            suite.name, suite.passed, suite.failed
        );
        if let Some(case) = &suite.first_failure {
            println!("    first failure: {case}");
        }
    }
    if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(SELFTEST_FAILURE)
    }
}

fn emit(text: &str) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()
}

fn run(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Selftest { .. } => unreachable!("handled before dispatch"),
        Command::ValidateDomain { config } => {
            let config = ExperimentConfig::from_path(&config)?;
            let result = certify_domain(&config.domain);
            let report = match &result {
                Ok(report) | Err(HarnessError::DomainRejected { report, .. }) => report,
                Err(_) => return result.map(|_| ExitCode::SUCCESS),
            };
            emit(&serde_json::to_string_pretty(report).expect("report serializes"))?;
            result.map(|_| ExitCode::SUCCESS)
        }
        Command::Approx { config, degree } => {
            let config = ExperimentConfig::from_path(&config)?;
            certify_domain(&config.domain)?;
            let degree = degree.unwrap_or(*config.degrees.last().expect("degrees checked nonempty"));
            let target = config.target(config.riemann_map()?)?;
            let (q, report) = run_pipeline(&target, &config.domain, degree, &config.pipeline_controls())?;
            let out = serde_json::json!({
                "report": report,
                "coefficients": q.to_monomial(),
            });
            emit(&serde_json::to_string_pretty(&out).expect("report serializes"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Convergence {
            config: path,
            output,
            svg,
            timings,
        } => {
            let config = ExperimentConfig::from_path(&path)?;
            let table = run_convergence(&config)?;
            let csv = table.to_csv(timings);
            match output.or_else(|| config.output.clone()) {
                Some(path) => fs::write(path, &csv)?,
                None => emit(csv.trim_end())?,
            }
            if let Some(path) = svg {
                fs::write(path, render_svg(&table))?;
            }
            if table.has_failures() {
                for row in table.failures() {
                    eprintln!("degree {}: {}", row.degree, row.error.as_deref().unwrap_or_default());
                }
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
