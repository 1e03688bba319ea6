use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dsinfo::downsample::Algorithm;
use dsinfo::signal::DataFormat;
use dsinfo::workflow::{self, WorkflowConfig};
use dsinfo::{Error, Result};

/// Quantify information loss from time-series downsampling.
///
/// Settings come from the built-in synthetic config, then from --config,
/// then from command-line flags, each overriding the previous one.
/// DSINFO_THREADS sets the worker thread count.
#[derive(Parser)]
#[command(name = "dsinfo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON workflow configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Artifact (or dataset) output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated algorithm names, e.g. LTTB,Decimate.
    #[arg(long, global = true, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Comma-separated factors, sorted and unique.
    #[arg(long, global = true, value_delimiter = ',')]
    factors: Option<Vec<usize>>,
    #[arg(long, global = true)]
    folds: Option<usize>,
    #[arg(long, global = true)]
    segment_seconds: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every step and write the full artifact directory.
    Run(Common),
    /// Downsample and write metric summaries only.
    Metrics(Common),
    /// Re-rank configurations from a previous run's artifacts in --out.
    Rank(Common),
    /// Render SVG plots from a previous run's artifacts in --out.
    Plot(Common),
    /// Serial extraction timing and speedup per grid cell.
    Bench(Common),
    /// Write the configured dataset to --out.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

fn resolve(c: &Common) -> Result<WorkflowConfig> {
    let mut config = match &c.config {
        Some(path) => WorkflowConfig::read(path)?,
        None => WorkflowConfig::builtin(),
    };
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    if let Some(out) = &c.out {
        config.out = out.clone();
    }
    if let Some(algs) = &c.algorithms {
        config.algorithms = algs
            .iter()
            .map(|a| a.parse::<Algorithm>().map_err(|e| Error::Config(e.to_string())))
            .collect::<Result<_>>()?;
    }
    if let Some(f) = &c.factors {
        config.factors = f.clone();
    }
    if let Some(f) = c.folds {
        config.folds = f;
    }
    if let Some(s) = c.segment_seconds {
        config.segment_seconds = Some(s);
    }
    config.validate()?;
    Ok(config)
}

fn set_threads() -> Result<()> {
    let Ok(value) = std::env::var("DSINFO_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Config(format!("DSINFO_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    set_threads()?;
    match cli.command {
        Command::Run(c) => {
            let config = resolve(&c)?;
            let outcome = workflow::cmd_run(&config)?;
            println!(
                "{} signals, {} grid cells; {} files in {}",
                outcome.dataset.n_signals,
                config.grid().len(),
                outcome.manifest.files.len(),
                outcome.out.display()
            );
        }
        Command::Metrics(c) => {
            let config = resolve(&c)?;
            let m = workflow::cmd_metrics(&config)?;
            println!("{} files in {}", m.files.len(), config.out.display());
        }
        Command::Rank(c) => {
            let config = resolve(&c)?;
            workflow::cmd_rank(&config.out, &config)?;
            println!("ranking written to {}", config.out.join("ranking").display());
        }
        Command::Plot(c) => {
            let config = resolve(&c)?;
            workflow::cmd_plot(&config.out)?;
            println!("plots written to {}", config.out.join("plots").display());
        }
        Command::Bench(c) => {
            let config = resolve(&c)?;
            let rows = workflow::cmd_bench(&config)?;
            println!("{:<16} {:>12} {:>12} {:>8}", "config", "t_orig [s]", "t_ds [s]", "S");
            for r in rows {
                println!(
                    "{:<16} {:>12.6} {:>12.6} {:>8.2}",
                    r.config.to_string(),
                    r.t_orig,
                    r.t_ds,
                    r.s
                );
            }
        }
        Command::Synth { common, format } => {
            let config = resolve(&common)?;
            let format: DataFormat = format.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
            let info = workflow::cmd_synth(&config, format)?;
            println!("{} signals written to {}", info.n_signals, config.out.display());
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
            ExitCode::from(workflow::exit_code(&e) as u8)
        }
    }
}
