use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Multi-object tracking evaluation: metrics, leaderboards, a reference
/// tracker and calibration checks.
#[derive(Debug, Parser)]
#[command(name = "motkit", version, about, long_about = None)]
pub struct Cli {
    /// Worker threads for per-sequence work (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a result bundle against ground truth.
    Eval(EvalArgs),
    /// Rank several trackers' report files by average rank.
    Rank(RankArgs),
    /// Run the reference tracker over detection files.
    Track(TrackArgs),
    /// Random search for tracker parameters on a training set.
    Tune(TuneArgs),
    /// Pedestrian speed statistics of ground-truth trajectories.
    Audit(AuditArgs),
    /// Check result files for format errors without ground truth.
    Validate(ValidateArgs),
    /// Write a synthetic benchmark (ground truth, detections, metadata).
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Bounding-box overlap, default threshold 0.5.
    #[value(name = "2d")]
    TwoD,
    /// Ground-plane distance in meters, default threshold 1.0.
    #[value(name = "3d")]
    ThreeD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct MatchArgs {
    #[arg(long, value_enum, default_value = "2d")]
    pub mode: Mode,
    /// Overrides the mode's default matching threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Ground-truth directory with one <Sequence>.txt per sequence and
    /// optional .meta sidecars.
    #[arg(long)]
    pub gt: PathBuf,
    /// Result directory with one <Sequence>.txt per sequence.
    #[arg(long)]
    pub results: PathBuf,
    /// Sequence list; defaults to every .txt file in the ground-truth
    /// directory.
    #[arg(long)]
    pub seqmap: Option<PathBuf>,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Tracker name used in reports.
    #[arg(long, default_value = "tracker")]
    pub name: String,
    /// Declared tracker speed in frames per second.
    #[arg(long)]
    pub hz: Option<f64>,
    /// Use the sample instead of the population standard deviation for
    /// MOTA spread.
    #[arg(long)]
    pub sample_stddev: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Directory for <name>.json, <name>.txt and <name>_sequences.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-sequence event logs to <out>/events/.
    #[arg(long, requires = "out")]
    pub events: bool,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Report files written by `eval --out`.
    #[arg(required = true, num_args = 2..)]
    pub reports: Vec<PathBuf>,
    /// Comma-separated metrics, e.g. mota,motp,idsw (default: ten standard
    /// measures).
    #[arg(long)]
    pub metrics: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write the leaderboard here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    /// Detection directory with one <Sequence>.txt per sequence.
    #[arg(long)]
    pub det: PathBuf,
    #[arg(long)]
    pub seqmap: Option<PathBuf>,
    /// key = value parameter file; missing keys keep their defaults.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Directory with <Sequence>.homography files; fills world coordinates
    /// of the output.
    #[arg(long)]
    pub project: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub det: PathBuf,
    /// Ground-truth directory; also searched for .meta and, in 3D mode,
    /// .homography files.
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub seqmap: Option<PathBuf>,
    /// Default parameters to sample around.
    #[arg(long)]
    pub defaults: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Directory for best_params.txt and search_log.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub seqmap: Option<PathBuf>,
    /// Homography for sequences without their own .homography file.
    #[arg(long)]
    pub homography: Option<PathBuf>,
    /// Frame rate for sequences without a .meta file.
    #[arg(long)]
    pub fps: Option<f64>,
    /// Speeds above this many m/s are reported as outliers.
    #[arg(long, default_value_t = 3.0)]
    pub max_speed: f64,
    #[arg(long, default_value_t = 0.25)]
    pub bin_width: f64,
    /// Directory for speed_histogram.csv, mean_speeds.csv, outliers.csv and
    /// speed_samples.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub results: PathBuf,
    /// When given, every listed sequence must have a file.
    #[arg(long)]
    pub seqmap: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub sequences: usize,
    #[arg(long, default_value_t = 100)]
    pub frames: u32,
    #[arg(long, default_value_t = 5)]
    pub targets: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Detection jitter in pixels.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0.0)]
    pub miss_rate: f64,
    /// Expected clutter detections per frame.
    #[arg(long, default_value_t = 0.0)]
    pub clutter: f64,
    /// Let targets enter and leave mid-sequence.
    #[arg(long)]
    pub lifespans: bool,
}
