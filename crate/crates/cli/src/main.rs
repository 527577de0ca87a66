//! `nearfield`: experiment front end for near-field UCA/ULA beamfocusing.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nearfield_core::geometry::ArrayKind;

#[derive(Parser, Debug)]
#[command(name = "nearfield", version, about = "Near-field beamfocusing experiments for ULAs and UCAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gain along the focus direction versus range (CSV `r_m,gain`).
    GainSweep(GainSweepArgs),
    /// 3 dB beamdepth around a focal point (JSON).
    Beamdepth(BeamdepthArgs),
    /// Effective beamfocusing Rayleigh distance at one angle (JSON) or over a sweep (CSV).
    Ebrd(EbrdArgs),
    /// Bessel, Fresnel-ratio and sinc decay profiles on a common axis (CSV).
    Decay(DecayArgs),
    /// Monte Carlo MRT sum-rate for a scenario file (CSV).
    Sumrate(SumrateArgs),
    /// Run the built-in accuracy and anchor checks.
    Validate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrayArg {
    Ula,
    Uca,
}

impl From<ArrayArg> for ArrayKind {
    fn from(a: ArrayArg) -> Self {
        match a {
            ArrayArg::Ula => ArrayKind::Ula,
            ArrayArg::Uca => ArrayKind::Uca,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ArrayOpts {
    #[arg(long, value_enum)]
    pub array: ArrayArg,
    /// Element count.
    #[arg(long, required_unless_present = "aperture_m", conflicts_with = "aperture_m")]
    pub n: Option<usize>,
    /// Aperture in metres; the element count is derived at half-wavelength spacing.
    #[arg(long)]
    pub aperture_m: Option<f64>,
    #[arg(long, default_value_t = 28.0)]
    pub fc_ghz: f64,
}

#[derive(Args, Debug, Clone)]
pub struct FocusOpts {
    #[arg(long)]
    pub focus_m: f64,
    /// Elevation from the array normal.
    #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
    pub theta_deg: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_deg: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelArg {
    Exact,
    Taylor,
    Closed,
}

#[derive(Args, Debug)]
pub struct GainSweepArgs {
    #[command(flatten)]
    pub array: ArrayOpts,
    #[command(flatten)]
    pub focus: FocusOpts,
    #[arg(long, value_enum, default_value_t = ModelArg::Exact)]
    pub model: ModelArg,
    /// Window start in metres [default: 1.2·D].
    #[arg(long)]
    pub r_lo: Option<f64>,
    /// Window end in metres [default: 100·R_D].
    #[arg(long)]
    pub r_hi: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaArg {
    Paper,
    Computed,
    Both,
}

#[derive(Args, Debug)]
pub struct BeamdepthArgs {
    #[command(flatten)]
    pub array: ArrayOpts,
    #[command(flatten)]
    pub focus: FocusOpts,
    #[arg(long, value_enum, default_value_t = AlphaArg::Paper)]
    pub alpha: AlphaArg,
    /// Also locate the 3 dB edges on the exact gain.
    #[arg(long)]
    pub numeric: bool,
    /// Grid size of the numeric sweep.
    #[arg(long, default_value_t = 4000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EbrdArgs {
    #[command(flatten)]
    pub array: ArrayOpts,
    /// UCA elevation [default: 90].
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: Option<f64>,
    /// ULA broadside azimuth [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub phi_deg: Option<f64>,
    /// `start:stop:step` in degrees, inclusive of `stop`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta_deg", "phi_deg"])]
    pub sweep_deg: Option<String>,
    /// `paper` or `computed`.
    #[arg(long, value_enum, default_value_t = AlphaArg::Paper)]
    pub alpha: AlphaArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecayArgs {
    #[arg(long, default_value_t = 0.0)]
    pub x_lo: f64,
    #[arg(long, default_value_t = 50.0)]
    pub x_hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SumrateArgs {
    /// Scenario JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the scenario trial count.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GainSweep(a) => commands::gain_sweep(&a),
        Command::Beamdepth(a) => commands::beamdepth(&a),
        Command::Ebrd(a) => commands::ebrd(&a),
        Command::Decay(a) => commands::decay(&a),
        Command::Sumrate(a) => commands::sumrate(&a),
        Command::Validate => commands::validate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}
