//! `cayley`: command-line front end for the Cayley-tree Ising library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "cayley", version, about = "Exact computations for the Ising model with competing interactions on the Cayley tree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class-energy table, minimal classes, energy gap and phase regions.
    Utable(UtableArgs),
    /// Minimal classes over a grid of couplings, as CSV.
    Scan(ScanArgs),
    /// Ground-state audit of a configuration file.
    Audit(AuditArgs),
    /// Contours, boundary partition and contour Hamiltonian of a configuration file.
    Contours(ContoursArgs),
    /// Exact (or sampled) finite-volume Gibbs marginals.
    Gibbs(GibbsArgs),
    /// Root marginals under both boundary conditions and at the mirrored field.
    Phases(PhasesArgs),
    /// Exhaustive energy-gap check over all configurations on a ball.
    Peierls(PeierlsArgs),
    /// Number of contours through a vertex, by size, with the (4e)^(2r) bound.
    Nr(NrArgs),
    /// Write a configuration file for a standard configuration family.
    Generate(GenerateArgs),
}

/// Couplings as exact strings: integers, fractions like `3/2`, or decimals like `-0.25`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct CouplingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub j1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: String,
    /// Constant external field.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha0", "alpha1"], required_unless_present_all = ["alpha0", "alpha1"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// Field on even-length words (periodic-field model).
    #[arg(long, allow_hyphen_values = true, requires = "alpha1")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<String>,
    /// Field on odd-length words (periodic-field model).
    #[arg(long, allow_hyphen_values = true, requires = "alpha0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct UtableArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub couplings: CouplingArgs,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// `lo:hi:count` (inclusive, evenly spaced) or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub j1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct AuditArgs {
    /// Configuration file (JSON).
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub couplings: CouplingArgs,
    /// Audit balls centered within this distance of the root (default min(3, n+1)).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ContoursArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Constant-field couplings; when given, the contour Hamiltonian is checked against the direct one.
    #[arg(long, allow_hyphen_values = true, requires_all = ["j2", "alpha"])]
    pub j1: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["j1", "alpha"])]
    pub j2: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["j1", "j2"])]
    pub alpha: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BcArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerArg {
    Exact,
    Mcmc,
}

#[derive(Args, Debug, Serialize)]
pub struct GibbsArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Inverse temperature, or a comma-separated list for a sweep.
    #[arg(long)]
    pub beta: String,
    #[arg(long, value_enum, default_value = "plus")]
    pub bc: BcArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub couplings: CouplingArgs,
    /// Also report P(spin at this vertex = +1); repeatable.
    #[arg(long = "vertex")]
    pub vertices: Vec<String>,
    #[arg(long, value_enum, default_value = "exact")]
    pub sampler: SamplerArg,
    #[arg(long, default_value_t = 100_000)]
    pub sweeps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Maximum number of enumerated configurations.
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u128,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PhasesArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Comma-separated inverse temperatures.
    #[arg(long)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value_t = 1 << 24)]
    pub cap: u128,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PeierlsArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub j1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value_t = 2)]
    pub radius: usize,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct NrArgs {
    #[arg(long)]
    pub rmax: usize,
    /// Radius of the volume whose minus subsets are enumerated.
    #[arg(long)]
    pub volume: usize,
    /// Vertex the contours must pass through (default: the root).
    #[arg(long, default_value = "")]
    pub vertex: String,
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Constant,
    Alternating,
    Periodic,
    WeaklyPeriodic,
}

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Spin of constant configurations, or the even-sublattice spin of alternating ones.
    #[arg(long, value_enum, default_value = "plus")]
    pub spin: BcArg,
    /// Generators of the index-two subgroup, comma separated (periodic kinds).
    #[arg(long)]
    pub subgroup: Option<String>,
    /// `l0,l1` for periodic, or four values `v00,v01,v10,v11` for weakly periodic.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Utable(a) => commands::utable(a),
        Command::Scan(a) => commands::scan(a),
        Command::Audit(a) => commands::audit(a),
        Command::Contours(a) => commands::contours(a),
        Command::Gibbs(a) => commands::gibbs(a),
        Command::Phases(a) => commands::phases(a),
        Command::Peierls(a) => commands::peierls(a),
        Command::Nr(a) => commands::nr(a),
        Command::Generate(a) => commands::generate(a),
    };
    match result {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}
