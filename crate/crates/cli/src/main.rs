//! `zpfsim`: runs the zero-point-field experiments and writes CSV or JSON.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zpfsim::MassPreset;

use crate::output::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "zpfsim",
    version,
    about = "Stochastic zero-point-field experiments"
)]
struct Cli {
    /// Seed for every stochastic command.
    #[arg(long, global = true, env = "ZPFSIM_SEED", default_value_t = 0)]
    seed: u64,

    /// Worker threads for Monte Carlo runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write data here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    /// Named particle: electron, neutron or pion.
    #[arg(long, value_parser = parse_preset, conflicts_with = "mass_kg")]
    mass: Option<MassPreset>,
    /// Explicit mass in kg.
    #[arg(long)]
    mass_kg: Option<f64>,
}

fn parse_preset(s: &str) -> Result<MassPreset, String> {
    s.parse().map_err(|e: zpfsim::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the ZPF spectral energy density.
    Spectrum {
        #[arg(long, default_value_t = 0.0)]
        nu_min: f64,
        #[arg(long)]
        nu_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Draw a mode set and one amplitude realization.
    SampleZpf {
        #[arg(long, default_value_t = 0.0)]
        nu_min: f64,
        #[arg(long)]
        nu_max: f64,
        #[arg(long, default_value_t = 64)]
        modes: usize,
        /// Normalization volume, m³.
        #[arg(long, default_value_t = 1e-12)]
        volume: f64,
    },
    /// Autocorrelation of a white or ZPF-shaped (ω³) spectrum.
    Autocorr {
        #[arg(long, value_enum, default_value_t = commands::Shape::Zpf)]
        shape: commands::Shape,
        /// Band limit Ω, rad/s.
        #[arg(long, default_value_t = 1.0)]
        omega_max: f64,
        /// Largest lag in units of 1/Ω.
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Table resolution for the tabulated spectrum.
        #[arg(long, default_value_t = 4097)]
        samples: usize,
    },
    /// ZPF-driven damped oscillator.
    Oscillator {
        #[command(flatten)]
        mass: MassArgs,
        #[arg(long, default_value_t = 1e15)]
        omega0: f64,
        /// Damping rate (default ω₀/20).
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Time step (default 0.04/ω₀).
        #[arg(long)]
        dt: Option<f64>,
        /// Simulated time (default 8000/γ).
        #[arg(long)]
        duration: Option<f64>,
        /// Relative half-width of the drive band (default 10γ/ω₀).
        #[arg(long)]
        band: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        #[arg(long, default_value_t = 0.0)]
        v0: f64,
        /// Also dump the trajectory as CSV (t,x,v).
        #[arg(long)]
        trajectory: Option<std::path::PathBuf>,
        /// Keep every n-th trajectory sample.
        #[arg(long, default_value_t = 1000)]
        stride: usize,
    },
    /// Equilibrium position and momentum spreads.
    Uncertainty {
        #[command(flatten)]
        mass: MassArgs,
        #[arg(long, default_value_t = 1e15)]
        nu: f64,
    },
    /// Minimum flight distance for spacelike-separated spin measurements.
    Locality {
        #[command(flatten)]
        mass: MassArgs,
        /// Speed in m/s.
        #[arg(long, conflicts_with = "speed_fraction")]
        speed: Option<f64>,
        /// Speed as a fraction of c.
        #[arg(long)]
        speed_fraction: Option<f64>,
    },
    /// Monte Carlo anticorrelation after a beam splitter.
    Beamsplitter {
        /// Detection thresholds in signal units (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        i_signal: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n_trials: u64,
        #[arg(long, default_value_t = zpfsim::mc::DEFAULT_BLOCK_SIZE)]
        block_size: u64,
    },
    /// Analytic CHSH value with real detectors.
    ChshAnalytic {
        /// Detection efficiency.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// CHSH value over an (η, ε) grid.
    ChshScan {
        #[arg(long, default_value_t = 100)]
        eta_points: usize,
        #[arg(long, default_value_t = 0.0)]
        eta_min: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 10)]
        epsilon_points: usize,
        #[arg(long, default_value_t = 0.0)]
        epsilon_min: f64,
        #[arg(long, default_value_t = 0.2)]
        epsilon_max: f64,
    },
    /// Monte Carlo CHSH experiment with imperfect detectors.
    ChshMc {
        /// Detection efficiency.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Pairs per analyzer setting.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, default_value_t = zpfsim::mc::DEFAULT_BLOCK_SIZE)]
        block_size: u64,
    },
    /// Check the CHSH bound on random non-contextual hidden-variable models.
    LhvCheck {
        #[arg(long, default_value_t = 1000)]
        models: usize,
        #[arg(long, default_value_t = 8)]
        states: usize,
    },
    /// Vacuum-fluctuation dark-energy estimate.
    DarkEnergy {
        #[command(flatten)]
        mass: MassArgs,
    },
}

/// Analyzer angles in radians (default: 0, π/8, π/4, 3π/8).
#[derive(Debug, Args)]
pub struct AngleArgs {
    #[arg(long)]
    phi_a1: Option<f64>,
    #[arg(long)]
    phi_b1: Option<f64>,
    #[arg(long)]
    phi_a2: Option<f64>,
    #[arg(long)]
    phi_b2: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("zpfsim: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

impl Cli {
    fn worker_count(&self) -> usize {
        self.workers.unwrap_or(0)
    }
}

impl From<zpfsim::Error> for Failure {
    fn from(e: zpfsim::Error) -> Self {
        Failure::Library(e)
    }
}
