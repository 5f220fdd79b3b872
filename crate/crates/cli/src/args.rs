use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "odkit", version, about = "Outlier detection over an embedded time-series store")]
pub struct Cli {
    /// Store directory.
    #[arg(long, global = true, env = "ODKIT_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
    /// Recorded with the connection; the store is always local.
    #[arg(long, global = true)]
    pub host: Option<String>,
    #[arg(long, global = true)]
    pub user: Option<String>,
    #[arg(long, global = true)]
    pub password: Option<String>,
    /// File of `key = value` defaults; flags win over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Append a CSV file to a table, creating the table on first use.
    Ingest(IngestArgs),
    /// Fit a detector on part of a table and score the rest.
    Detect(DetectArgs),
    /// Write synthetic data and ground-truth labels as CSV.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Print the algorithm names with their categories.
    ListAlgos(ListArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub database: Option<String>,
    #[arg(long)]
    pub table: Option<String>,
    /// CSV with a `timestamp` column followed by value columns.
    pub csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub database: Option<String>,
    #[arg(long)]
    pub table: Option<String>,
    /// Inclusive start of the queried range, epoch ms.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<i64>,
    /// Exclusive end of the queried range, epoch ms.
    #[arg(long, allow_hyphen_values = true)]
    pub end: Option<i64>,
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Hyperparameter override `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub contamination: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Leading fraction of the queried rows used for training.
    #[arg(long, conflicts_with_all = ["test_start", "test_end"])]
    pub train_fraction: Option<f64>,
    /// Score `[test-start, test-end)` and train on the whole queried range.
    #[arg(long, requires = "test_end", allow_hyphen_values = true)]
    pub test_start: Option<i64>,
    #[arg(long, requires = "test_start", allow_hyphen_values = true)]
    pub test_end: Option<i64>,
    /// Ground truth as `timestamp,label` CSV; enables the metric lines.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also write the fitted model to this path.
    #[arg(long)]
    pub save_model: Option<PathBuf>,
    #[arg(long)]
    pub no_figures: bool,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Two Gaussian clusters plus uniform noise outliers.
    Static(StaticArgs),
    /// Sine, trend and noise with injected anomalies.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct GenerateOut {
    /// Data CSV in the ingest format.
    #[arg(long)]
    pub out: PathBuf,
    /// Label CSV, `timestamp,label`.
    #[arg(long)]
    pub labels_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StaticArgs {
    #[arg(long, default_value_t = 900)]
    pub n_inliers: usize,
    #[arg(long, default_value_t = 2)]
    pub dimension: usize,
    #[arg(long, default_value_t = 0.1)]
    pub contamination: f64,
    #[arg(long, default_value_t = 0.5)]
    pub cluster_std: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    pub noise_low: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    pub noise_high: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub out: GenerateOut,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 500)]
    pub length: usize,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 100.0)]
    pub period: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub trend: f64,
    #[arg(long, default_value_t = 0.2)]
    pub noise_sigma: f64,
    /// `AT:MAGNITUDE`; repeatable.
    #[arg(long)]
    pub spike: Vec<String>,
    /// `AT:MAGNITUDE`; repeatable.
    #[arg(long)]
    pub drop: Vec<String>,
    /// `AT:MAGNITUDE:EXTENT`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub level_shift: Vec<String>,
    /// `AT:SLOPE:EXTENT`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub trend_change: Vec<String>,
    #[arg(long, default_value_t = 11)]
    pub seed: u64,
    #[command(flatten)]
    pub out: GenerateOut,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    /// Only algorithms in this category, e.g. "Time series, deep".
    #[arg(long)]
    pub category: Option<String>,
}
