//! Command-line surface of the `aps` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

const BIT_CONVENTION: &str = "Bitstrings everywhere (inputs, outputs, printed states) are written \
most-significant work bit first: the leftmost bit is y_0, selecting element 0 or labelling \
vertex 0. The environment variable APS_SIM_MAX_QUBITS overrides the default cap of 26 total \
qubits.";

#[derive(Parser)]
#[command(name = "aps", version, about = "Statevector experiments: amplitude \
amplification with cost-proportional phase oracles, and eigenvalue scans of diagonal cost \
operators", after_help = BIT_CONVENTION)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Classic Grover search baseline on a plain work register
    Grover(GroverArgs),
    /// One amplified search run for a problem instance
    Aps(ApsArgs),
    /// Sweep the oracle parameter and report KLD peaks
    EigenScan(EigenScanArgs),
}

#[derive(Args)]
pub struct GroverArgs {
    /// Number of work qubits
    #[arg(long)]
    pub n: u32,

    /// Marked state as a bitstring of exactly n bits; repeat for several
    #[arg(long, required = true)]
    pub marked: Vec<String>,

    /// Oracle + diffusion rounds
    #[arg(short, long, default_value_t = 1)]
    pub reps: u32,

    /// Write the work distribution as CSV here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ApsArgs {
    /// Path to the problem instance JSON
    #[arg(long)]
    pub instance: PathBuf,

    /// Expected work-qubit count; rejected if inconsistent with the instance
    #[arg(long)]
    pub n: Option<u32>,

    /// Ancilla qubits (default: same as the work count)
    #[arg(long)]
    pub m: Option<u32>,

    /// Preprocessing rounds (default: floor(pi/4 * sqrt(2^m)))
    #[arg(long)]
    pub pre_reps: Option<u32>,

    /// Main rounds (default: round(sqrt(2^n)))
    #[arg(long)]
    pub main_reps: Option<u32>,

    /// Sample this many shots instead of reporting exact probabilities
    #[arg(long, default_value_t = 0)]
    pub shots: u64,

    /// Seed for sampling; required when --shots is set
    #[arg(long)]
    pub seed: Option<u64>,

    /// Cost-to-phase map
    #[arg(long, value_enum, default_value_t = MapChoice::Linear)]
    pub phase_map: MapChoice,

    /// Target cost; defaults to the instance's own (subset-sum target, or
    /// total edge weight for max-cut). Required for diagonal instances.
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<f64>,

    /// Write the sorted histogram here (CSV also gets a .meta.json sidecar)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct EigenScanArgs {
    /// Path to the problem instance JSON
    #[arg(long)]
    pub instance: PathBuf,

    /// Expected work-qubit count; rejected if inconsistent with the instance
    #[arg(long)]
    pub n: Option<u32>,

    /// Ancilla qubits (default: same as the work count)
    #[arg(long)]
    pub m: Option<u32>,

    /// Preprocessing rounds (default: floor(pi/4 * sqrt(2^m)))
    #[arg(long)]
    pub pre_reps: Option<u32>,

    /// Main rounds for the fixed policy (default: round(sqrt(2^n)))
    #[arg(long)]
    pub main_reps: Option<u32>,

    /// Sweep start (default 0.5)
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,

    /// Sweep end (default: largest cost + 0.5)
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,

    /// Grid step (default 0.1)
    #[arg(long)]
    pub lambda_step: Option<f64>,

    /// How to pick the main-round count per grid value
    #[arg(long, value_enum, default_value_t = PolicyChoice::Adaptive)]
    pub policy: PolicyChoice,

    /// Which state count the adaptive policy divides by the degeneracy
    #[arg(long, value_enum, default_value_t = SpaceChoice::Work)]
    pub search_space: SpaceChoice,

    /// Cost-to-phase map; defaults to triangular when the spectrum extends
    /// past lambda-max, linear otherwise
    #[arg(long, value_enum)]
    pub phase_map: Option<MapChoice>,

    /// Minimum height above the taller neighbour for a grid point to count
    /// as a peak
    #[arg(long, default_value_t = 0.05)]
    pub min_prominence: f64,

    /// Sample this many shots per grid point instead of exact probabilities
    #[arg(long, default_value_t = 0)]
    pub shots: u64,

    /// Seed for sampling; required when --shots is set
    #[arg(long)]
    pub seed: Option<u64>,

    /// Write the sweep here (plus a .peaks.json sidecar)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapChoice {
    Linear,
    Triangular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyChoice {
    Fixed,
    Adaptive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceChoice {
    Work,
    Joint,
}
