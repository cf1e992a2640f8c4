use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use synth_audit::geometry::NumericScaling;
use synth_audit::metrics::{AirF1Mode, IdWeighting};

#[derive(Debug, Parser)]
#[command(name = "synth-audit", version, about = "Privacy metrics for synthetic tabular data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a synthetic dataset against its real source.
    Evaluate(EvaluateArgs),
    /// List the available metrics.
    ListMetrics {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Cross-check the metrics against brute-force reference implementations.
    Oracle {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(3..))]
        max_n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScalingArg {
    Raw,
    MinMax,
}

impl From<ScalingArg> for NumericScaling {
    fn from(s: ScalingArg) -> Self {
        match s {
            ScalingArg::Raw => NumericScaling::Raw,
            ScalingArg::MinMax => NumericScaling::MinMax,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightingArg {
    PerValue,
    PerAttribute,
}

impl From<WeightingArg> for IdWeighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::PerValue => IdWeighting::PerValue,
            WeightingArg::PerAttribute => IdWeighting::PerAttribute,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AirArg {
    PerRecord,
    Global,
}

impl From<AirArg> for AirF1Mode {
    fn from(a: AirArg) -> Self {
        match a {
            AirArg::PerRecord => AirF1Mode::PerRecord,
            AirArg::Global => AirF1Mode::Global,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub real: PathBuf,
    #[arg(long)]
    pub synth: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    /// Comma-separated key (quasi-identifier) attributes.
    #[arg(long, value_delimiter = ',')]
    pub keys: Vec<String>,
    #[arg(long)]
    pub sensitive: Option<String>,
    /// Comma-separated metric ids; all metrics when omitted.
    #[arg(long, value_delimiter = ',')]
    pub select: Vec<String>,
    /// CSV with columns `real_index,synthetic_index` (0-based, one-to-one).
    #[arg(long)]
    pub gen_map: Option<PathBuf>,
    /// JSON file with metric configuration; flags given here take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,

    #[arg(long)]
    pub cvp_threshold: Option<f64>,
    #[arg(long)]
    pub dvp_threshold: Option<f64>,
    #[arg(long)]
    pub air_band: Option<f64>,
    #[arg(long, value_enum)]
    pub air_f1: Option<AirArg>,
    #[arg(long)]
    pub hitr_divisor: Option<f64>,
    #[arg(long)]
    pub minkowski_p: Option<f64>,
    #[arg(long)]
    pub projection_k: Option<usize>,
    #[arg(long, value_enum)]
    pub projection_scaling: Option<ScalingArg>,
    #[arg(long, value_enum)]
    pub id_weighting: Option<WeightingArg>,
    #[arg(long)]
    pub kfold_k: Option<usize>,
    #[arg(long)]
    pub mir_test_fraction: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}
