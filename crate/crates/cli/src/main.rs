mod config;
mod scenarios;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use holomotion::io::{read_json, write_json};
use holomotion::{Error, Result};
use serde::{Deserialize, Serialize};

use config::ExperimentConfig;
use scenarios::Failure;

/// Thread count for the numerical kernels; the default is one per core.
const THREADS_VAR: &str = "HOLOMOTION_THREADS";

/// Exit status for a run that completed but failed one of its checks.
const CHECKS_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "holomotion", version, about = "Run holomotion experiment scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output`).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Seed for randomized probes (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse a config and check that its inputs exist.
    Validate { config: PathBuf },
    /// Summarize a finished run directory.
    Report { run_dir: PathBuf },
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    scenario: String,
    status: String,
    message: Option<String>,
    seed: u64,
    threads: usize,
    holomotion_version: String,
    config_path: String,
    config: serde_json::Value,
    inputs: Vec<String>,
    outputs: Vec<String>,
    wall_seconds: f64,
    summary: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let result = match cli.command {
        Command::Run { config, output, seed } => run(&config, output, seed),
        Command::Validate { config } => validate(&config).map(|()| ExitCode::SUCCESS),
        Command::Report { run_dir } => report(&run_dir).map(|()| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| fail(&e))
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.category().exit_code() as u8)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| Error::Config(format!("{THREADS_VAR} = {value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))
}

fn load(config: &Path) -> Result<ExperimentConfig> {
    if !config.exists() {
        return Err(Error::Config(format!("config file {} does not exist", config.display())));
    }
    ExperimentConfig::read(config)
}

/// Input files named anywhere in the scenario parameters.
fn inputs(cfg: &ExperimentConfig) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(obj) = cfg.params.as_object() {
        let nested = obj.get("extension").and_then(|v| v.as_object());
        for map in std::iter::once(obj).chain(nested) {
            for key in ["motion", "germ", "field"] {
                if let Some(p) = map.get(key).and_then(|v| v.as_str()) {
                    out.push(cfg.resolve(Path::new(p)).display().to_string());
                }
            }
        }
    }
    out
}

fn run(config: &Path, output: Option<PathBuf>, seed: Option<u64>) -> Result<ExitCode> {
    let started = Instant::now();
    let mut cfg = load(config)?;
    if let Some(o) = output {
        cfg.output = o;
    } else {
        cfg.output = cfg.resolve(&cfg.output.clone());
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    scenarios::check_inputs(&cfg)?;
    let dir = cfg.output.clone();
    let outcome = scenarios::run(&cfg, &dir)?;
    let (status, message, code) = match &outcome.failure {
        None => ("pass", None, ExitCode::SUCCESS),
        Some(Failure::Checks(m)) => ("checks-failed", Some(m.clone()), ExitCode::from(CHECKS_FAILED)),
        Some(Failure::NonConvergence(m)) => {
            ("non-convergence", Some(m.clone()), ExitCode::from(holomotion::ErrorCategory::NonConvergence.exit_code() as u8))
        }
    };
    let manifest = Manifest {
        scenario: cfg.scenario.name().into(),
        status: status.into(),
        message: message.clone(),
        seed: cfg.seed,
        threads: rayon::current_num_threads(),
        holomotion_version: env!("CARGO_PKG_VERSION").into(),
        config_path: config.display().to_string(),
        config: serde_json::to_value(&cfg).map_err(|e| Error::Config(e.to_string()))?,
        inputs: inputs(&cfg),
        outputs: outcome.files,
        wall_seconds: started.elapsed().as_secs_f64(),
        summary: outcome.summary,
    };
    write_json(dir.join("manifest.json"), &manifest)?;
    match message {
        Some(m) => eprintln!("{}: {status}: {m}", cfg.scenario.name()),
        None => println!("{}: {status} ({} files in {})", cfg.scenario.name(), manifest.outputs.len(), dir.display()),
    }
    Ok(code)
}

fn validate(config: &Path) -> Result<()> {
    let cfg = load(config)?;
    scenarios::check_inputs(&cfg)?;
    println!("{}: ok ({})", config.display(), cfg.scenario.name());
    Ok(())
}

fn report(run_dir: &Path) -> Result<()> {
    let manifest: Manifest = read_json(run_dir.join("manifest.json"))?;
    println!("scenario  {}", manifest.scenario);
    println!("status    {}", manifest.status);
    if let Some(m) = &manifest.message {
        println!("message   {m}");
    }
    println!("seed      {}", manifest.seed);
    println!("threads   {}", manifest.threads);
    println!("wall time {:.2} s", manifest.wall_seconds);
    for name in &manifest.outputs {
        let path = run_dir.join(name);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        if name.ends_with(".csv") {
            println!("  {name}: {} rows", text.lines().count().saturating_sub(1));
        } else {
            println!("  {name}: {} bytes", text.len());
        }
    }
    if let Ok(text) = std::fs::read_to_string(run_dir.join("summary.txt")) {
        print!("{text}");
    }
    Ok(())
}
