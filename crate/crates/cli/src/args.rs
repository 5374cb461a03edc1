use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "opo-epr", version, about = "Noise spectra and entanglement of a type-II OPO with an intracavity plate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noise variance of one mode as the local-oscillator phase is scanned.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum, default_value_t = Mode::Signal)]
        mode: Mode,
        /// First phase, degrees.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi_start: f64,
        /// Last phase, degrees.
        #[arg(long, default_value_t = 180.0, allow_negative_numbers = true)]
        phi_stop: f64,
        #[arg(long, default_value_t = 181)]
        phi_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tilt, squeezing and log-negativity along a grid of coupling values.
    ScanCoupling {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c_start: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        c_stop: f64,
        #[arg(long, default_value_t = 41)]
        c_points: usize,
        /// Explicit comma-separated coupling values, replacing the range.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["c_start", "c_stop", "c_points"])]
        c_values: Option<Vec<f64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Output covariance matrix and its entanglement report.
    Covariance {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::A1a2)]
        basis: BasisArg,
        /// Apply the relative phase shift that puts the state in standard form.
        #[arg(long)]
        standardized: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analyze a measurement record, or predict detected squeezing.
    Analyze {
        /// JSON measurement record.
        #[arg(
            required_unless_present = "budget",
            conflicts_with_all = ["budget", "quantum_efficiency", "visibility", "propagation", "electronic_noise_db"]
        )]
        record: Option<PathBuf>,
        /// Predict the detected sum-mode squeezing of the model instead.
        #[arg(long)]
        budget: bool,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Operating point apart from the coupling.
#[derive(Debug, Args, Clone, Default)]
pub struct ModelArgs {
    /// Pump amplitude over threshold, below 1.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Noise frequency over the cavity bandwidth.
    #[arg(long, conflicts_with_all = ["frequency_hz", "round_trip_s"], allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Noise frequency in Hz (needs --round-trip-s).
    #[arg(long, requires = "round_trip_s", allow_negative_numbers = true)]
    pub frequency_hz: Option<f64>,
    /// Cavity round-trip time in seconds.
    #[arg(long, requires = "frequency_hz", allow_negative_numbers = true)]
    pub round_trip_s: Option<f64>,
    /// Output-coupler amplitude loss.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Total amplitude loss.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa_prime: Option<f64>,
    /// key = value file of defaults, overridden by flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CouplingArgs {
    /// Normalized plate coupling c = 2ρ/κ′.
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Plate angle ρ in radians, converted to c.
    #[arg(long, conflicts_with = "coupling", allow_negative_numbers = true)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct ChainArgs {
    /// Photodiode quantum efficiency [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub quantum_efficiency: Option<f64>,
    /// Fringe visibility, entering squared [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub visibility: Option<f64>,
    /// Propagation transmission [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub propagation: Option<f64>,
    /// Dark-noise level in dB below shot noise, added to the prediction.
    #[arg(long, allow_negative_numbers = true)]
    pub electronic_noise_db: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Signal,
    Idler,
    Plus,
    Minus,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Signal => "signal",
            Mode::Idler => "idler",
            Mode::Plus => "plus",
            Mode::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    A1a2,
    Plusminus,
}
