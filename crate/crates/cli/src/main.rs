//! `qbattery`: stored energy of spin-chain quantum batteries under a double
//! quench. See the README for the config-file schema and output formats.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, Model, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "qbattery",
    version,
    about = "Spin-chain quantum battery simulator"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat `key = value` file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    model: Option<Model>,

    /// Output file (standard output when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (all cores when absent)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_parser = ["full", "simplified"])]
    evaluator: Option<String>,

    /// XY anisotropy
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// XY initial dimerization
    #[arg(long, global = true)]
    delta0: Option<f64>,

    /// XY dimerization step during charging
    #[arg(long, global = true)]
    delta1: Option<f64>,

    #[arg(long, global = true)]
    n_dimers: Option<usize>,

    /// Ising initial field
    #[arg(long, global = true)]
    h0: Option<f64>,

    /// Ising field step during charging
    #[arg(long, global = true)]
    h1: Option<f64>,

    #[arg(long, global = true)]
    n_sites: Option<usize>,

    #[arg(long, global = true)]
    t_end: Option<f64>,

    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Initial span searched for the first maximum
    #[arg(long, global = true)]
    short_span: Option<f64>,

    /// Revival window starts at window_a × size
    #[arg(long, global = true)]
    window_a: Option<f64>,

    /// Revival window ends at window_b × size
    #[arg(long, global = true)]
    window_b: Option<f64>,

    /// More log output on stderr (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Stored energy versus time, with the regime report
    Trace,
    /// Regime values along a delta0 (xy) or h0 (ising) grid
    Sweep {
        #[arg(long)]
        grid_start: Option<f64>,
        #[arg(long)]
        grid_stop: Option<f64>,
        #[arg(long)]
        grid_step: Option<f64>,
        /// Explicit comma-separated grid; overrides start/stop/step
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
    },
    /// Regime values versus chain size, with a linear fit of tau_r
    Scaling {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Ground-state phase of the dimerized XY chain
    Phase {
        /// Dimerization (defaults to delta0)
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Lower-band occupation over momentum at one time (default: tau_r)
    Snapshot {
        #[arg(long)]
        time: Option<f64>,
    },
    /// Compare the engine against exact diagonalization
    OracleCheck {
        /// Number of spins
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn overlay<T: Clone>(slot: &mut T, value: &Option<T>) {
    if let Some(v) = value {
        *slot = v.clone();
    }
}

fn overlay_opt<T: Clone>(slot: &mut Option<T>, value: &Option<T>) {
    if value.is_some() {
        *slot = value.clone();
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let g = &cli.global;
    if let Some(path) = &g.config {
        cfg.apply_file(path)?;
    }
    overlay(&mut cfg.model, &g.model);
    overlay_opt(&mut cfg.out, &g.out);
    overlay(&mut cfg.format, &g.format);
    overlay_opt(&mut cfg.workers, &g.workers);
    if let Some(e) = &g.evaluator {
        cfg.set("evaluator", e)?;
    }
    overlay(&mut cfg.gamma, &g.gamma);
    overlay(&mut cfg.delta0, &g.delta0);
    overlay(&mut cfg.delta1, &g.delta1);
    overlay(&mut cfg.n_dimers, &g.n_dimers);
    overlay(&mut cfg.h0, &g.h0);
    overlay(&mut cfg.h1, &g.h1);
    overlay(&mut cfg.n_sites, &g.n_sites);
    overlay_opt(&mut cfg.t_end, &g.t_end);
    overlay_opt(&mut cfg.dt, &g.dt);
    overlay(&mut cfg.short_span, &g.short_span);
    overlay_opt(&mut cfg.window_a, &g.window_a);
    overlay_opt(&mut cfg.window_b, &g.window_b);
    match &cli.command {
        Command::Trace => {}
        Command::Sweep {
            grid_start,
            grid_stop,
            grid_step,
            grid,
        } => {
            overlay_opt(&mut cfg.grid_start, grid_start);
            overlay_opt(&mut cfg.grid_stop, grid_stop);
            overlay_opt(&mut cfg.grid_step, grid_step);
            overlay_opt(&mut cfg.grid, grid);
        }
        Command::Scaling { sizes } => overlay(&mut cfg.sizes, sizes),
        Command::Phase { delta } => overlay_opt(&mut cfg.delta, delta),
        Command::Snapshot { time } => overlay_opt(&mut cfg.time, time),
        Command::OracleCheck { sites, tolerance } => {
            overlay(&mut cfg.sites, sites);
            overlay(&mut cfg.tolerance, tolerance);
        }
    }
    Ok(cfg)
}

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::Trace => commands::trace(cfg),
        Command::Sweep { .. } => commands::sweep(cfg),
        Command::Scaling { .. } => commands::scaling(cfg),
        Command::Phase { .. } => commands::phase(cfg),
        Command::Snapshot { .. } => commands::snapshot(cfg),
        Command::OracleCheck { .. } => commands::oracle_check(cfg),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    match cfg.workers {
        Some(0) => Err(CliError::Input("--workers must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(format!("cannot start {n} workers: {e}")))?
            .install(|| dispatch(&cli.command, &cfg)),
        None => dispatch(&cli.command, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
