//! `apspectra`: batch runs of the almost-periodicity and spectral estimators.
//!
//! ```text
//! apspectra classify --config runs/bernoulli.json --out results/
//! ```
//!
//! Exit status: 0 on success, 2 when the configuration is rejected (the
//! message names the field), 1 on any other failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::Parser;

use crate::commands::{Command, Context};
use crate::config::ConfigError;
use crate::output::{sha256_hex, OutputLock};

#[derive(Parser, Debug)]
#[command(name = "apspectra", version, about = "Almost periodic points and their spectra at finite scale")]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads.
    #[arg(long, env = "APSPECTRA_THREADS")]
    threads: Option<usize>,

    /// Replaces the seed of random presets.
    #[arg(long)]
    seed_override: Option<u64>,
}

fn run(cli: &Cli) -> Result<String> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config::bad("threads", "must be positive").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let text = std::fs::read_to_string(&cli.config)
        .with_context(|| format!("reading {}", cli.config.display()))?;
    let mut cfg = config::parse(&text)?;
    if let Some(seed) = cli.seed_override {
        cfg.seed = Some(seed);
    }
    let hash = sha256_hex(&serde_json::to_vec(&cfg)?);

    let _lock = OutputLock::acquire(&cli.out)?;
    let ctx = Context { config: &cfg, hash: &hash };
    let (artifacts, summary) = commands::run(cli.command, &ctx)?;
    let names = artifacts.names().join(", ");
    artifacts.commit(&cli.out)?;
    Ok(format!("{summary}\nwrote {names} to {}", cli.out.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
