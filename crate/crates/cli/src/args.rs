//! Command-line flags and their JSON config-file equivalents.
//!
//! Every flag is optional at parse time so that a flag given on the command
//! line can be told apart from one left unset; unset flags fall back to the
//! config file, then to the built-in default.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "cohscat",
    version,
    about = "Coherent scattering off composite targets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file supplying defaults for any flag; flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Threshold for "much smaller than" in coherence verdicts.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Unit of all angles read or written.
    #[arg(long, global = true, value_enum)]
    pub angle_unit: Option<AngleUnit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Rad,
    Deg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection and transmission off 1D delta arrays.
    Delta1d(Delta1dArgs),
    /// Born cross section off a composite target.
    Born(BornArgs),
    /// Coherence verdicts for plane waves, packets and ensembles.
    Coherence(CoherenceArgs),
    /// Rutherford cross section for alpha particles, or the foil table analysis.
    Rutherford(RutherfordArgs),
    /// Monte Carlo scattering angles.
    Sample(SampleArgs),
    /// N*sqrt(A)/Z^2 for the scintillation-count table.
    Table1(Table1Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Delta1d(_) => "delta1d",
            Command::Born(_) => "born",
            Command::Coherence(_) => "coherence",
            Command::Rutherford(_) => "rutherford",
            Command::Sample(_) => "sample",
            Command::Table1(_) => "table1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Transfer,
    Boundary,
}

/// Angle grid shared by the angular subcommands.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct AngleGrid {
    /// Explicit angles, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub theta_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Delta1dArgs {
    /// Shorthand: unit mass and wave number, strength 1/beta.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Shorthand: site spacing in units of 1/k.
    #[arg(long)]
    pub ka: Option<f64>,
    /// Number of equal sites.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub strength: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Wave numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub k_points: Option<usize>,
    #[arg(long, value_enum)]
    pub solver: Option<Solver>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Coulomb,
    Yukawa,
    Gaussian,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
// unknown keys cannot be rejected alongside the flattened angle grid
#[serde(default)]
pub struct BornArgs {
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// JSON potential description; overrides --potential.
    #[arg(long)]
    pub potential_file: Option<PathBuf>,
    /// Coulomb/Yukawa coupling g, or Gaussian depth V0.
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    #[arg(long)]
    pub screening_length: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    /// Point charges all at the origin, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub charges: Option<Vec<f64>>,
    /// JSON target description with Gaussian constituents.
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub m_d: Option<f64>,
    #[arg(long)]
    pub m_target: Option<f64>,
    /// Relative kinetic energy E_r.
    #[arg(long)]
    pub energy: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleGrid,
    /// Extent used for the Born-validity advisory.
    #[arg(long)]
    pub born_extent: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoherenceArgs {
    /// Relative momentum |p_r| (or mean packet momentum).
    #[arg(long)]
    pub p_r: Option<f64>,
    /// Target size L.
    #[arg(long)]
    pub length: Option<f64>,
    /// Treat the beam as a packet with this momentum spread.
    #[arg(long)]
    pub momentum_spread: Option<f64>,
    /// JSON ensemble of packets.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaUnit {
    Barn,
    Fm2,
    M2,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
// unknown keys cannot be rejected alongside the flattened angle grid
#[serde(default)]
pub struct RutherfordArgs {
    /// Analyse the scintillation table instead of computing a cross section.
    #[arg(long)]
    pub table1: bool,
    #[arg(long)]
    pub table1_path: Option<PathBuf>,
    #[arg(long)]
    pub z: Option<u32>,
    /// Alpha kinetic energy in MeV.
    #[arg(long)]
    pub energy: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleGrid,
    #[arg(long, value_enum)]
    pub area_unit: Option<AreaUnit>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleArgs {
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Split the draws over this many seed streams.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Sample a tabulated distribution (JSON output of `born`) instead.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Emit a histogram over this many equal cos(theta) bins.
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Table1Args {
    #[arg(long)]
    pub table1_path: Option<PathBuf>,
}

/// Config file layout: global keys at top level, one optional section per
/// subcommand, keyed by flag name with underscores.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub epsilon: Option<f64>,
    pub angle_unit: Option<AngleUnit>,
    pub delta1d: Delta1dArgs,
    pub born: BornArgs,
    pub coherence: CoherenceArgs,
    pub rutherford: RutherfordArgs,
    pub sample: SampleArgs,
    pub table1: Table1Args,
}

macro_rules! fill {
    ($cli:expr, $cfg:expr; $($field:ident),+ $(,)?) => {
        $( if $cli.$field.is_none() { $cli.$field = $cfg.$field.clone(); } )+
    };
}

impl AngleGrid {
    fn fill_from(&mut self, cfg: &AngleGrid) {
        // an explicit list on the command line replaces a configured range
        if self.theta.is_some() {
            return;
        }
        fill!(self, cfg; theta, theta_min, theta_max, theta_points);
    }
}

impl Cli {
    /// Fill every flag left unset on the command line from the config.
    pub fn apply_config(&mut self, cfg: &ConfigFile) {
        fill!(self.global, cfg; output, format, epsilon, angle_unit);
        match &mut self.command {
            Command::Delta1d(a) => {
                let c = &cfg.delta1d;
                fill!(a, c; beta, ka, n, spacing, strength, mass, k, k_min, k_max, k_points, solver);
            }
            Command::Born(a) => {
                let c = &cfg.born;
                fill!(a, c; potential, potential_file, coupling, screening_length, width, charges, target, m_d, m_target, energy, born_extent);
                a.angles.fill_from(&c.angles);
            }
            Command::Coherence(a) => {
                let c = &cfg.coherence;
                fill!(a, c; p_r, length, momentum_spread, ensemble);
            }
            Command::Rutherford(a) => {
                let c = &cfg.rutherford;
                a.table1 |= c.table1;
                fill!(a, c; table1_path, z, energy, area_unit);
                a.angles.fill_from(&c.angles);
            }
            Command::Sample(a) => {
                let c = &cfg.sample;
                fill!(a, c; theta_min, count, seed, workers, table, bins);
            }
            Command::Table1(a) => {
                let c = &cfg.table1;
                fill!(a, c; table1_path);
            }
        }
    }
}
