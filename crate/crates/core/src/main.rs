use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pcpr::harness::{
    io, run_antenna_benchmark, run_gauss_sweep, run_solve, write_antenna, write_solve, write_sweep, ExperimentConfig,
    ExperimentKind, Method, SolveFiles, THREADS_ENV,
};
use pcpr::{Error, Result};

/// Phase retrieval from partially coherent measurements.
#[derive(Parser)]
#[command(name = "pcpr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Success-rate sweep over coherent pairs on Gaussian instances.
    GaussSweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dipole AUT benchmark with near-field deviations and a far-field cut.
    Antenna {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Retrieves coefficients from an operator, measured data and a
    /// coherence structure.
    Solve {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        magnitudes: PathBuf,
        #[arg(long)]
        coherence: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        method: String,
        /// Solver settings (the `solver` section is used).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Writes `solution.csv` and `report.json` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output_dir(cli: Option<PathBuf>, config: &ExperimentConfig) -> Result<PathBuf> {
    cli.or_else(|| config.output_dir.clone())
        .ok_or_else(|| Error::Config("no output directory: pass --out or set output_dir".into()))
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn load(path: &Path, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let config = ExperimentConfig::load(path)?;
    config.validate(kind)?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::GaussSweep { config, out } => {
            let config = load(&config, ExperimentKind::GaussSweep)?;
            let dir = output_dir(out, &config)?;
            let result = run_gauss_sweep(&config)?;
            write_sweep(&result, &dir)?;
            for row in &result.summary {
                println!("m2={:<4} {:<22} {:>6}/{}", row.m2, row.method, row.successes, row.trials);
            }
        }
        Command::Antenna { config, out } => {
            let config = load(&config, ExperimentKind::Antenna)?;
            let dir = output_dir(out, &config)?;
            let result = run_antenna_benchmark(&config)?;
            write_antenna(&result, &dir)?;
            for row in &result.table {
                println!(
                    "{:<22} eps_c {:>10.4} dB  eps_m {:>10.4} dB",
                    row.method, row.median_epsilon_c, row.median_epsilon_m
                );
            }
        }
        Command::Solve {
            operator,
            magnitudes,
            coherence,
            reference,
            method,
            config,
            out,
        } => {
            let method: Method = method.parse()?;
            let solver = match config {
                Some(p) => load(&p, ExperimentKind::Solve)?.solver,
                None => Default::default(),
            };
            let files = SolveFiles {
                operator,
                magnitudes,
                coherence,
                reference,
            };
            let output = run_solve(&files, method, &solver)?;
            match out {
                Some(dir) => write_solve(&output, &dir)?,
                None => {
                    io::write_vector(std::io::stdout().lock(), &output.z)?;
                    eprintln!("{}", serde_json::to_string_pretty(&output.summary).expect("summary serializes"));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
