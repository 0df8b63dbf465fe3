//! Command-line arguments. Every argument struct is serialised into the run
//! manifest.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::io::Format;

#[derive(Debug, Parser)]
#[command(
    name = "bosim",
    version,
    about = "Boson-sampling simulation, mesh design and unitary reconstruction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a Haar-random unitary.
    Haar(HaarArgs),
    /// Decompose a unitary into a triangular beam-splitter mesh.
    Decompose(DecomposeArgs),
    /// Multiply a mesh back into a unitary.
    Compose(ComposeArgs),
    /// Exact output distribution for a Fock input.
    Simulate(SimulateArgs),
    /// Draw events from a distribution file.
    Sample(SampleArgs),
    /// Two-photon Hong-Ou-Mandel visibilities for every input and output pair.
    Visibilities(VisibilitiesArgs),
    /// Simulated one- and two-photon measurement data.
    Synthesize(SynthesizeArgs),
    /// Recover a unitary from measurement data.
    Reconstruct(ReconstructArgs),
    /// Coupler rotations and S-bend deformations for a mesh.
    Chip(ChipArgs),
    /// Pairwise fidelities and similarities between output files.
    Report(ReportArgs),
    /// Write the bundled example unitaries and parameter table.
    ExportFixtures(ExportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct HaarArgs {
    /// Number of modes.
    #[arg(short, long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pinning {
    Minimal,
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    /// Unitary JSON file.
    pub unitary: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// How input phases are used to zero element phases.
    #[arg(long, value_enum, default_value_t = Pinning::Minimal)]
    pub pinning: Pinning,
    /// Two decimals in CSV output instead of full precision.
    #[arg(long)]
    pub display_precision: bool,
    /// Project the input onto the nearest unitary (for rounded matrices).
    #[arg(long)]
    pub repair: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ComposeArgs {
    /// Parameter table (CSV) or layout (JSON).
    pub layout: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    pub unitary: PathBuf,
    /// Occupation string such as 10101.
    #[arg(long)]
    pub input: String,
    /// quantum, classical or partial:<r>.
    #[arg(long, default_value = "quantum")]
    pub model: String,
    /// Shorthand for --model classical.
    #[arg(long)]
    pub classical: bool,
    /// Shorthand for --model partial:<r>; the input must hold three photons.
    #[arg(long)]
    pub partial: Option<f64>,
    /// Keep only outcomes with at most one photon per mode.
    #[arg(long)]
    pub collision_free: bool,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub repair: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Distribution JSON written by `simulate`.
    pub distribution: PathBuf,
    #[arg(long)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct VisibilitiesArgs {
    pub unitary: PathBuf,
    /// Indistinguishability of the photon pair.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub repair: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthesizeArgs {
    pub unitary: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// none, gaussian:<relative sigma> or poisson:<shots>.
    #[arg(long, default_value = "none")]
    pub noise: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub repair: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    /// Measurement data JSON.
    pub data: PathBuf,
    /// Output unitary JSON.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Unitary used for gauge alignment and to settle complex conjugation.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Also write the full fit report (χ², candidates, gauge) here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Repair the reference unitary.
    #[arg(long)]
    pub repair: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapping {
    /// Coupled power T = t².
    Cross,
    /// Coupled power T = 1 − t².
    Bar,
}

#[derive(Debug, Args, Serialize)]
pub struct ChipArgs {
    /// Parameter table (CSV) or layout (JSON).
    pub layout: PathBuf,
    /// Chip geometry JSON; defaults to the built-in uncalibrated geometry.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mapping::Cross)]
    pub mapping: Mapping,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// Files or directories (every non-manifest JSON inside is used).
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Also write the table as CSV.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Repair unitaries that are only approximately unitary.
    #[arg(long)]
    pub repair: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ExportArgs {
    /// Output directory.
    #[arg(short, long)]
    pub out: PathBuf,
}
