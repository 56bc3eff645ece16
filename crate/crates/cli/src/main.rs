//! Command-line front end for the hybrid-optimizer tumor-classification
//! pipeline.

mod augment;
mod commands;
mod config;
mod error;
mod ingest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::FileConfig;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "hawkwolf",
    version,
    about = "Hybrid hawk/wolf optimizer with an Otsu-segmented CNN classification pipeline"
)]
struct Cli {
    /// TOML configuration file (missing keys take documented defaults).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = rayon default, 1 = sequential evaluation).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for reports and artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment images: mask PGMs plus a threshold report.
    Segment {
        #[arg(long)]
        input: PathBuf,
    },
    /// Per-segment feature CSV.
    Features {
        #[arg(long)]
        input: PathBuf,
    },
    /// Train the classifier head on a labeled corpus.
    Train {
        #[arg(long)]
        input: PathBuf,
        /// Labels file (`name,yes|no` lines); not needed with yes//no/ dirs.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Classify images with a stored model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Metrics from a model over a labeled corpus, or from stored counts.
    Evaluate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Stored confusion counts as `tp,fp,fn,tn`.
        #[arg(long)]
        confusion: Option<String>,
    },
    /// Time/memory/fitness table for HHO, GWO and the hybrid.
    BenchOpt {
        /// Comma-separated subset of sphere,rastrigin,rosenbrock,ackley.
        #[arg(long)]
        functions: Option<String>,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        population: Option<usize>,
    },
    /// Materialize the augmentation recipe as PNGs.
    Augment {
        #[arg(long)]
        input: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = FileConfig::load(cli.config.as_deref())?;
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    let threads = cli.threads.or(config.threads).unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Segment { input } => commands::segment::run(&config, &input, &cli.out),
        Command::Features { input } => commands::features::run(&config, &input, &cli.out),
        Command::Train { input, labels } => {
            commands::train::run(&config, &input, labels.as_deref(), seed, &cli.out)
        }
        Command::Predict { model, input } => commands::predict::run(&model, &input, &cli.out),
        Command::Evaluate { model, input, labels, confusion } => match (confusion, model, input) {
            (Some(counts), None, None) => commands::evaluate::run_from_confusion(&counts, &cli.out),
            (None, Some(model), Some(input)) => commands::evaluate::run_with_model(
                &config,
                &model,
                &input,
                labels.as_deref(),
                &cli.out,
            ),
            _ => Err(CliError::usage(
                "evaluate needs either --confusion tp,fp,fn,tn or --model plus --input",
            )),
        },
        Command::BenchOpt { functions, seeds, dim, iterations, population } => {
            let mut section = config.bench.clone();
            if let Some(f) = functions {
                section.functions = f.split(',').map(|s| s.trim().to_string()).collect();
            }
            if let Some(s) = seeds {
                section.seeds = s;
            }
            if let Some(d) = dim {
                section.dim = d;
            }
            if let Some(i) = iterations {
                section.max_iterations = i;
            }
            if let Some(p) = population {
                section.population = p;
            }
            commands::bench::run(&section, seed, &cli.out)
        }
        Command::Augment { input } => commands::augment_cmd::run(&config, &input, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; anything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
