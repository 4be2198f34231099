use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use tame_measure::crofton::{
    estimate_curve_length_with_samples, estimate_measure_with_samples, EstimatorOptions,
    SampleRecord,
};
use tame_measure::harness::{
    bound_command, parse_window, run_scenario, write_samples_csv, BoundCommand, HarnessError,
    RunConfig, Scenario,
};
use tame_measure::sets::{ParametricCurve, SemiAlgebraicSet};

#[derive(Parser)]
#[command(name = "tame-measure", version, about = "Cauchy–Crofton measure estimates and component bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Sampling {
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Per-sample diagnostics as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the (m-1)-dimensional measure of a set inside a window.
    Measure {
        #[arg(long)]
        set: PathBuf,
        /// Window as "c1,c2,...;r".
        #[arg(long)]
        window: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Estimate the length of a polynomial curve on [0, 1].
    Length {
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Evaluate a bound: diagram, optm, khovanskii, zell or corollary.
    Bound {
        kind: String,
        /// KEY=VALUE arguments.
        args: Vec<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a named scenario and its checks.
    Verify {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Add wall-clock seconds to the report.
        #[arg(long)]
        timing: bool,
    },
}

fn emit(value: &impl Serialize, path: Option<&Path>) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).expect("results serialize") + "\n";
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T, HarnessError> + Send,
) -> Result<T, HarnessError> {
    match workers {
        None => f(),
        Some(0) => Err(HarnessError::Input("--workers must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Input(e.to_string()))?
            .install(f),
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// `base` itself for a single estimate, `stem.name.ext` otherwise.
fn csv_targets(base: &Path, samples: &[(String, Vec<SampleRecord>)]) -> Vec<PathBuf> {
    if samples.len() == 1 {
        return vec![base.to_path_buf()];
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("samples");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    samples
        .iter()
        .map(|(name, _)| base.with_file_name(format!("{stem}.{name}.{ext}")))
        .collect()
}

/// Exit code on success: 0 when all checks pass, 1 otherwise.
fn run(cli: Cli) -> Result<u8, HarnessError> {
    let opts = EstimatorOptions::default();
    match cli.command {
        Command::Measure { set, window, sampling } => {
            let set = SemiAlgebraicSet::from_json(&read(&set)?)?;
            let window = parse_window(&window)?;
            let (estimate, samples) = with_workers(sampling.workers, || {
                Ok(estimate_measure_with_samples(&set, &window, sampling.samples, sampling.seed, &opts)?)
            })?;
            if let Some(p) = &sampling.csv {
                write_samples_csv(p, &samples)?;
            }
            emit(&estimate, sampling.json.as_deref())?;
            Ok(0)
        }
        Command::Length { curve, sampling } => {
            let curve = ParametricCurve::from_json(&read(&curve)?)?;
            let (estimate, samples) = with_workers(sampling.workers, || {
                Ok(estimate_curve_length_with_samples(&curve, sampling.samples, sampling.seed, &opts)?)
            })?;
            if let Some(p) = &sampling.csv {
                write_samples_csv(p, &samples)?;
            }
            emit(&estimate, sampling.json.as_deref())?;
            Ok(0)
        }
        Command::Bound { kind, args, json } => {
            let cmd: BoundCommand = kind.parse()?;
            emit(&bound_command(cmd, &args)?, json.as_deref())?;
            Ok(0)
        }
        Command::Verify {
            scenario,
            samples,
            seed,
            workers,
            json,
            csv,
            timing,
        } => {
            let scenario: Scenario = scenario.parse()?;
            let mut config = RunConfig::new(scenario, samples, seed);
            config.output = json.clone();
            config.csv = csv.clone();
            let start = Instant::now();
            let mut run = with_workers(workers, || run_scenario(&config))?;
            if timing {
                run.report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
            }
            if let Some(base) = &csv {
                for (path, (_, rows)) in csv_targets(base, &run.samples).iter().zip(&run.samples) {
                    write_samples_csv(path, rows)?;
                }
            }
            emit(&run.report, json.as_deref())?;
            let failed = run.report.checks.iter().filter(|c| !c.passed).count();
            eprintln!(
                "{}: {}/{} checks passed",
                scenario.name(),
                run.report.checks.len() - failed,
                run.report.checks.len()
            );
            Ok(u8::from(failed > 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
