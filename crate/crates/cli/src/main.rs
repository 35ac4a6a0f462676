//! Single-binary command line over the sarcasm-detection toolkit. One TOML
//! config drives every verb; `--seed`, `--out` and `--threads` override it
//! per run. Every successful run writes `manifest.json` next to its
//! artifacts with content hashes of all inputs and outputs, and identical
//! manifest inputs always reproduce the artifacts byte for byte.
//!
//! Exit codes: 0 success, 1 validation or data error (one-line reason on
//! stderr), 2 usage error.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use manifest::Manifest;

#[derive(Parser)]
#[command(
    name = "sarcdet",
    version,
    about = "Multimodal (text+image) sarcasm detection pipelines",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// TOML run configuration; built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Root seed for this run; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory receiving artifacts and the manifest.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Worker threads for evaluation grid cells.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Verb {
    /// Filter a raw corpus and report why posts were dropped.
    Ingest,
    /// Corpus size, label balance and per-post averages.
    Stats,
    /// Write the linear feature vector of every post.
    Featurize,
    /// Train the linear classifier on the labeled corpus.
    TrainSvm,
    /// Train the fusion network on the labeled corpus.
    TrainNet,
    /// Run the train/test grid and write the accuracy report.
    Evaluate,
    /// Matching percentage and Fleiss' kappa per annotation task.
    Agreement,
    /// Build balanced gold sets at the three agreement thresholds.
    Gold,
    /// Label posts with a previously trained model.
    Predict,
    /// Generate the synthetic incongruity corpus with image features.
    Synth,
}

fn verb_name(verb: &Verb) -> &'static str {
    match verb {
        Verb::Ingest => "ingest",
        Verb::Stats => "stats",
        Verb::Featurize => "featurize",
        Verb::TrainSvm => "train-svm",
        Verb::TrainNet => "train-net",
        Verb::Evaluate => "evaluate",
        Verb::Agreement => "agreement",
        Verb::Gold => "gold",
        Verb::Predict => "predict",
        Verb::Synth => "synth",
    }
}

fn run(cli: Cli) -> sarcdet::Result<()> {
    let start = std::time::Instant::now();
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.experiment.seed = seed;
    }
    let seed = cfg.experiment.seed;
    let threads = cli.threads.unwrap_or(1);
    if threads == 0 {
        return Err(sarcdet::Error::InvalidConfig(
            "threads must be at least 1".into(),
        ));
    }
    std::fs::create_dir_all(&cli.out)?;

    let mut man = Manifest::new(verb_name(&cli.verb), seed, threads, &cfg.canonical()?);
    let out = cli.out.as_path();
    match &cli.verb {
        Verb::Ingest => commands::ingest::run(&cfg, out, &mut man),
        Verb::Stats => commands::stats::run(&cfg, out, &mut man),
        Verb::Featurize => commands::featurize::run(&cfg, out, &mut man),
        Verb::TrainSvm => commands::train_svm::run(&cfg, out, seed, &mut man),
        Verb::TrainNet => commands::train_net::run(&cfg, out, seed, &mut man),
        Verb::Evaluate => commands::evaluate::run(&cfg, out, seed, threads, &mut man),
        Verb::Agreement => commands::agreement::run(&cfg, out, &mut man),
        Verb::Gold => commands::gold::run(&cfg, out, seed, &mut man),
        Verb::Predict => commands::predict::run(&cfg, out, &mut man),
        Verb::Synth => commands::synth::run(&cfg, out, seed, &mut man),
    }?;
    man.write(out)?;
    // Timing goes to stderr so stdout stays reproducible.
    eprintln!(
        "{}: ok ({:.2}s)",
        verb_name(&cli.verb),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // One line, machine-parseable: `error: <reason>`.
            eprintln!("error: {}", err.to_string().replace('\n', "; "));
            ExitCode::from(1)
        }
    }
}
