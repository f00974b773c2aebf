//! `gaitdom`: reproducible pipelines from motion capture to dominance labels,
//! trained classifiers, crowd scenes and the rating service.
//!
//! Every command that uses randomness draws it from one generator seeded by
//! `--seed` (default 0) and records the seed in `<output>.meta.json`.

mod commands;
mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gaitdom::mapping::LabelSet;

pub use io::meta_path;

#[derive(Debug, Parser)]
#[command(name = "gaitdom", version, about = "Perceived-dominance toolkit for walking characters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice of the invocation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Leave wall-clock timestamps out of metadata so outputs are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BVH clips to canonical gait documents.
    Convert(ConvertArgs),
    /// Gait documents to a features CSV.
    Features(FeaturesArgs),
    /// Responses CSV to a labels CSV.
    Label(LabelArgs),
    /// Features and labels to a model file.
    Train(TrainArgs),
    /// Gait documents and a model to predicted labels (JSON lines).
    Classify(ClassifyArgs),
    /// Repeated k-fold cross-validation report.
    Crossval(CrossvalArgs),
    /// Scene config to a per-frame trace CSV.
    Simulate(SimulateArgs),
    /// Frame-update timing table.
    Bench(BenchArgs),
    /// Start the study and classification service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// BVH files or directories containing them.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Output directory; one `<stem>.json` per clip.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Joint-name mapping: `cmu`, `identity` or a JSON file.
    #[arg(long, default_value = "cmu")]
    pub mapping: String,
    /// Multiplier from file units to meters.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Frame rate to use instead of the file's frame time.
    #[arg(long)]
    pub fps_override: Option<f64>,
    /// Dataset tag stored in each gait.
    #[arg(long, default_value = "bvh")]
    pub source: String,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Gait documents or directories of them.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Responses CSV.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Labels CSV.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Scoring axis: the published coefficients or one fitted to these responses.
    #[arg(long, value_parser = ["published", "pca"], default_value = "published")]
    pub axis: String,
    /// Also save the fitted score normalization for later classification.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct ModelArgs {
    /// Label granularity.
    #[arg(long, default_value = "3", value_parser = parse_levels)]
    pub levels: LabelSet,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0 / 29.0)]
    pub gamma: f64,
    /// Pick C and gamma by inner cross-validation first. Optional value
    /// `c=0.1,1,10;gamma=0.01,0.1` replaces the default grids.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub grid: Option<String>,
    /// Folds of the grid search's inner cross-validation.
    #[arg(long, default_value_t = 5)]
    pub inner_k: usize,
}

fn parse_levels(s: &str) -> Result<LabelSet, String> {
    s.parse::<LabelSet>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Model file.
    #[arg(long, short)]
    pub output: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Gait documents or directories of them.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub model: PathBuf,
    /// Score normalization saved by `label --mapping`.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CrossvalArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 20)]
    pub iterations: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Report file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LibraryArgs {
    /// Gait documents or directories of them.
    #[arg(long, num_args = 1..)]
    pub gaits: Vec<PathBuf>,
    /// Labels CSV for the gaits.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene config JSON.
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub library: LibraryArgs,
    /// Trace CSV.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Frames to run instead of the config's count.
    #[arg(long)]
    pub frames: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Without `--gaits`, a synthetic labelled library is generated.
    #[command(flatten)]
    pub library: LibraryArgs,
    /// Size of the synthetic library.
    #[arg(long, default_value_t = 60)]
    pub synthetic: usize,
    /// Timed frames per measurement (at least 1000).
    #[arg(long, default_value_t = 1000)]
    pub frames: usize,
    /// Character counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = gaitdom::engine::BENCH_ROWS.to_vec())]
    pub rows: Vec<usize>,
    /// CSV table; standard output gets a text table either way.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = gaitdom_service::PORT_ENV, default_value_t = gaitdom_service::DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, env = gaitdom_service::DATA_ENV, default_value = "data")]
    pub data_dir: PathBuf,
}

/// A failed command: exit code and one stderr line `error: <kind>: <message>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into(), code: 1 }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "usage", message: message.into(), code: 2 }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::new("io", format!("{}: {e}", path.display()))
    }

    pub fn line(&self) -> String {
        format!("error: {}: {}", self.kind, self.message.replace(['\n', '\r'], " "))
    }
}

macro_rules! kind {
    ($($t:ty => $k:literal),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new($k, e.to_string())
            }
        })*
    };
}

kind! {
    gaitdom::mocap::MocapError => "mocap",
    gaitdom::features::FeatureError => "features",
    gaitdom::mapping::MappingError => "mapping",
    gaitdom::classifier::ClassifierError => "classifier",
    gaitdom::engine::EngineError => "engine",
    gaitdom_service::ServiceError => "service",
}

impl From<gaitdom::Error> for CliError {
    fn from(e: gaitdom::Error) -> Self {
        match e {
            gaitdom::Error::Mocap(e) => e.into(),
            gaitdom::Error::Feature(e) => e.into(),
            gaitdom::Error::Mapping(e) => e.into(),
            gaitdom::Error::Classifier(e) => e.into(),
            gaitdom::Error::Engine(e) => e.into(),
        }
    }
}

/// Parses and runs one invocation, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.line());
            e.code
        }
    }
}
