//! The `qlstma` command-line tool.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid data or configuration,
//! 3 numeric failure.

mod commands;
mod manifest;
pub mod plot;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::network::Variant;
use crate::qsim::Entangler;
use crate::training::AveragingDomain;

pub use manifest::{write_manifest, MANIFEST_FILE};

#[derive(Debug, Parser)]
#[command(name = "qlstma", version, about = "Quantum LSTM-attention permeability prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic well dataset and a train/test split.
    Generate(GenerateArgs),
    /// Train one or more independently seeded models.
    Train(TrainArgs),
    /// Predict permeability curves with a trained ensemble.
    Predict(PredictArgs),
    /// Score predictions against the measured curves.
    Evaluate(EvaluateArgs),
    /// Test error of every saved checkpoint.
    Curves(CurvesArgs),
    /// Facies-weighted inverse-distance baseline predictions.
    Baseline(BaselineArgs),
    /// Draw columns of a CSV file as an SVG line chart.
    Plot(PlotArgs),
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_entangler(s: &str) -> std::result::Result<Entangler, String> {
    match s {
        "chain" => Ok(Entangler::Chain),
        "ring" => Ok(Entangler::Ring),
        other => Err(format!("unknown entangler `{other}` (chain or ring)")),
    }
}

fn parse_averaging(s: &str) -> std::result::Result<AveragingDomain, String> {
    match s {
        "linear" => Ok(AveragingDomain::Linear),
        "log" => Ok(AveragingDomain::Log),
        other => Err(format!("unknown averaging `{other}` (linear or log)")),
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Wells CSV (`well_id,x,y,facies,depth,permeability_md`).
    #[arg(long)]
    pub data: PathBuf,
    /// Split CSV (`well_id,role`).
    #[arg(long)]
    pub split: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Wells per facies: channel,sand,mud.
    #[arg(long, value_delimiter = ',', default_value = "34,17,12")]
    pub wells_per_facies: Vec<usize>,
    /// Wells held out for testing, allocated proportionally to facies.
    #[arg(long, default_value_t = 10)]
    pub test_wells: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Variant,
    /// Qubits per circuit (quantum variants only).
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, value_parser = parse_entangler, default_value = "chain")]
    pub entangler: Entangler,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 10)]
    pub checkpoint_every: usize,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 0.5)]
    pub dropout: f64,
    /// Huber threshold.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 100)]
    pub timesteps: usize,
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    #[arg(long, default_value_t = 32)]
    pub dense: usize,
    /// How run curves are averaged at prediction time.
    #[arg(long, value_parser = parse_averaging, default_value = "linear")]
    pub averaging: AveragingDomain,
    /// Threads for independent runs (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Output directory of `train`.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    /// Which wells to predict: test, train or all.
    #[arg(long, default_value = "test")]
    pub wells: String,
    /// Override the averaging domain stored with the model.
    #[arg(long, value_parser = parse_averaging)]
    pub averaging: Option<AveragingDomain>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predictions CSV from `predict` or `baseline`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Wells CSV holding the measured curves.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// Output directory of `train`, or a single run directory.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Inverse-distance power.
    #[arg(long, default_value_t = 2.0)]
    pub power: f64,
    /// Weight for facies distance 0,1,2.
    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25")]
    pub similarity: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub timesteps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column for the x axis (defaults to the first column).
    #[arg(long)]
    pub x: Option<String>,
    /// Columns to draw (defaults to every other numeric column).
    #[arg(long, value_delimiter = ',')]
    pub y: Vec<String>,
    /// Keep only rows where COLUMN=VALUE.
    #[arg(long = "where", value_name = "COLUMN=VALUE")]
    pub filter: Option<String>,
    #[arg(long)]
    pub log_y: bool,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command.
/// Help and version requests are printed and return `Ok`.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(Error::Usage(e.render().to_string().trim_end().to_string()));
        }
    };
    match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Train(a) => commands::train(&a),
        Command::Predict(a) => commands::predict(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Curves(a) => commands::curves(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Plot(a) => commands::plot(&a),
    }
}
