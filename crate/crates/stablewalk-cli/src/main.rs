//! Experiment runner: builds laws and norming sequences from a declarative
//! config, drives the library modules, and writes plot-ready CSV plus a
//! manifest that records the effective configuration and every emitted
//! file.
//!
//! Exit codes: 0 all checks passed, 2 invalid configuration, 3 numerical
//! failure, 4 a configured acceptance check failed.

mod commands;
mod config;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::Config;

#[derive(Parser)]
#[command(name = "stablewalk", version, about = "Local limit experiments for heavy-tailed lattice walks")]
struct Cli {
    /// TOML configuration file; flags below override its values
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<String>,
    /// Comma-separated seed list
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Worker threads (0 = auto, env STABLE_LLT_THREADS as fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Convolution certificate tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Stable density and characteristic-function tables
    Density,
    /// Exact distribution of S_n and the local-limit ratio
    ExactLlt,
    /// Correlation quantity, bounds and decay-exponent fit
    CorrCheck,
    /// Logarithmic-average simulation study
    Aslt,
    /// Norming constants and the summability check
    Norming,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Density => "density",
            Command::ExactLlt => "exact-llt",
            Command::CorrCheck => "corr-check",
            Command::Aslt => "aslt",
            Command::Norming => "norming",
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            Config::from_toml(&text).map_err(|e| e.to_string())?
        }
        None => Config::default(),
    };
    if let Some(out) = &cli.out {
        cfg.run.out = out.clone();
    }
    if let Some(seeds) = &cli.seeds {
        cfg.run.seeds = seeds.clone();
    }
    if let Some(threads) = cli.threads {
        cfg.run.threads = threads;
    }
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(format!("tol must lie in (0, 1e-3], got {tol}"));
        }
        cfg.run.tol = tol;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::Density => commands::density(&cfg),
        Command::ExactLlt => commands::exact_llt_cmd(&cfg),
        Command::CorrCheck => commands::corr_check(&cfg),
        Command::Aslt => commands::aslt_cmd(&cfg),
        Command::Norming => commands::norming_cmd(&cfg),
    };

    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(3);
        }
    };

    let manifest = json!({
        "command": cli.command.name(),
        "effective_config": serde_json::to_value(&cfg).expect("config serializes"),
        "outputs": outcome
            .outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>(),
        "summary": outcome.summary,
        "pass": outcome.pass,
    });
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = stablewalk::export::write_file(
        Path::new(&cfg.run.out),
        &format!("{}_manifest.json", cli.command.name()),
        &manifest_text,
    ) {
        eprintln!("cannot write manifest: {e}");
        return ExitCode::from(3);
    }
    println!("{manifest_text}");

    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}
