use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;


/// Spectral and harmonic-stability analysis of vehicle platoons.
#[derive(Debug, Parser)]
#[command(name = "platoon-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Io {
    /// Platoon configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Laplacian spectrum, uniform bound and dominance certificate (JSON).
    Spectrum {
        #[command(flatten)]
        io: Io,
    },
    /// Harmonic-instability test (JSON). Exit 3 when closed-loop blocks are unstable.
    Harmonic {
        #[command(flatten)]
        io: Io,
    },
    /// Leader-to-last-vehicle frequency response (CSV).
    Freqresp {
        #[command(flatten)]
        io: Io,
        /// Number of log-spaced frequencies over the configured band.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Peak gain versus platoon length (CSV). Needs scalar gains/asymmetries.
    Gamma {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, default_value_t = 5)]
        n_step: usize,
    },
    /// Response to a unit step of the leader position (CSV).
    Step {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 200.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.002)]
        dt: f64,
        /// Emit absolute positions (vehicle i trails the leader by (i-1)·ref_distance)
        /// instead of deviations from the steady formation.
        #[arg(long)]
        absolute: bool,
    },
    /// Eigenvector identities behind the product form. Exit 4 when they fail.
    Identities {
        #[arg(long)]
        config: PathBuf,
    },
}

fn init_threads() {
    let Ok(v) = std::env::var("PLATOON_LAB_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size thread pool: {e}");
            }
        }
        Err(_) => log::warn!("ignoring PLATOON_LAB_THREADS={v}: not an integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum { io } => commands::spectrum(&io.config, io.out.as_deref()),
        Command::Harmonic { io } => commands::harmonic(&io.config, io.out.as_deref()),
        Command::Freqresp { io, points } => commands::freqresp(&io.config, io.out.as_deref(), points),
        Command::Gamma {
            io,
            n_min,
            n_max,
            n_step,
        } => commands::gamma(&io.config, io.out.as_deref(), n_min, n_max, n_step),
        Command::Step {
            io,
            t_end,
            dt,
            absolute,
        } => commands::step(&io.config, io.out.as_deref(), t_end, dt, absolute),
        Command::Identities { config } => commands::identities(&config),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
