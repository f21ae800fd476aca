//! `asiplab` - batch experiment runner for the hyperbolic-system
//! laboratory.
//!
//! Exit codes: 0 all gates pass, 1 gate failure, 2 config error,
//! 3 runtime/domain error.

mod config;
mod output;
mod pipeline;
mod svg;

use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use pipeline::{AppError, CommonOpts};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "asiplab", version, about = "hyperbolic-system statistics laboratory")]
struct Cli {
    /// Experiment config (TOML; JSON accepted by extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores); env ASIPLAB_WORKERS as fallback.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Soft gate failures become fatal.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ensemble simulation: variance curve, moment scalings, WIP check.
    Simulate,
    /// Green-Kubo variance from one long orbit (plus the variance-slope
    /// cross-check in stationary mode).
    Greenkubo,
    /// KS of normalized partial sums against N(0,1).
    Clt,
    /// Almost-sure CLT occupation-measure test.
    Asclt,
    /// Law-of-iterated-logarithm running statistic.
    Lil,
    /// Shrinking-target hit-count statistics.
    Targets,
    /// Empirical alpha-mixing decay.
    Mixing,
    /// Print the exact block schedule tau_j.
    Blocks {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        jmax: usize,
    },
    /// Print the feasible epsilon for the block machinery.
    Budget {
        #[arg(long)]
        k2: f64,
        #[arg(long)]
        kp: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Render SVG plots from previously emitted CSVs.
    Report,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, AppError> {
    // config-free subcommands
    match &cli.cmd {
        Cmd::Blocks { eps, jmax } => return pipeline::cmd_blocks(*eps, *jmax),
        Cmd::Budget { k2, kp, lambda } => return pipeline::cmd_budget(*k2, *kp, *lambda),
        _ => {}
    }

    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let opts = CommonOpts {
        out_dir: pipeline::resolve_out_dir(cli.out.clone(), &cfg),
        strict: cli.strict,
        workers: pipeline::resolve_workers(cli.workers, cfg.workers),
    };
    match cli.cmd {
        Cmd::Simulate => pipeline::cmd_simulate(&cfg, &opts, cli.seed),
        Cmd::Greenkubo => pipeline::cmd_greenkubo(&cfg, &opts, cli.seed),
        Cmd::Clt => pipeline::cmd_clt(&cfg, &opts, cli.seed),
        Cmd::Asclt => pipeline::cmd_asclt(&cfg, &opts, cli.seed),
        Cmd::Lil => pipeline::cmd_lil(&cfg, &opts, cli.seed),
        Cmd::Targets => pipeline::cmd_targets(&cfg, &opts, cli.seed),
        Cmd::Mixing => pipeline::cmd_mixing(&cfg, &opts, cli.seed),
        Cmd::Report => pipeline::cmd_report(&opts),
        Cmd::Blocks { .. } | Cmd::Budget { .. } => unreachable!(),
    }
}
