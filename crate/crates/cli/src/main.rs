//! `c2g`: convert color images to grayscale, score gray renditions with
//! C2G-SSIM, and benchmark decolorization methods over a directory.

mod config;
mod convert;
mod error;
mod eval;
mod score;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use c2g_core::{ImageKind, RankPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Settings;
use crate::error::{exit_code, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(
    name = "c2g",
    version,
    about = "SVD-based decolorization and C2G-SSIM benchmarking"
)]
struct Cli {
    /// Defaults file with `key = value` lines; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert one color image to an 8-bit grayscale PNG.
    Convert(ConvertArgs),
    /// Score a gray image against its color original.
    Score(ScoreArgs),
    /// Evaluate several methods over a directory of color images.
    Eval(EvalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Ntsc,
    CieY,
    SvdFixed,
    SvdAdaptive,
}

/// Options shared by the commands that run the metric.
#[derive(Args, Debug, Clone)]
pub struct MetricArgs {
    /// Image kind: photographic or synthetic.
    #[arg(long, value_name = "KIND")]
    kind: Option<ImageKind>,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Written as PNG.
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Chroma weight for svd-fixed.
    #[arg(long)]
    c: Option<f64>,
    #[command(flatten)]
    metric: MetricArgs,
    /// Retained rank: full, k=<n> or energy=<f>.
    #[arg(long, value_name = "POLICY")]
    rank: Option<RankPolicy>,
    /// CSV of the weight sweep (svd-adaptive only).
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long, value_name = "FILE")]
    color: PathBuf,
    #[arg(long, value_name = "FILE")]
    gray: PathBuf,
    #[command(flatten)]
    metric: MetricArgs,
    /// Directory for luminance, contrast, structure and quality map PNGs.
    #[arg(long, value_name = "DIR")]
    maps: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_name = "DIR")]
    dataset: PathBuf,
    /// Comma-separated: ntsc, cie-y, svd-fixed[:<c>], svd-adaptive.
    #[arg(long, value_delimiter = ',', required = true, value_name = "LIST")]
    methods: Vec<String>,
    /// Precomputed gray images, as <label>=<dir>. Repeatable.
    #[arg(long, value_name = "LABEL=DIR")]
    external: Vec<String>,
    /// JSON report path.
    #[arg(long, value_name = "FILE")]
    report: PathBuf,
    /// Also write the entries as CSV.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Write method,success_rate,average_score rows.
    #[arg(long, value_name = "FILE")]
    plot_data: Option<PathBuf>,
    /// Score margin within which a method counts as best on an image.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Directory for the gray images produced by built-in methods.
    #[arg(long, value_name = "DIR")]
    outputs: Option<PathBuf>,
    #[command(flatten)]
    metric: MetricArgs,
    /// Retained rank: full, k=<n> or energy=<f>.
    #[arg(long, value_name = "POLICY")]
    rank: Option<RankPolicy>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Convert(args) => convert::run(args, settings),
        Command::Score(args) => score::run(args, settings),
        Command::Eval(args) => eval::run(args, settings),
    }
}

impl MetricArgs {
    fn apply(&self, settings: &mut Settings) {
        if let Some(kind) = self.kind {
            settings.decolor.metric = settings.decolor.metric.with_kind(kind);
        }
    }
}
