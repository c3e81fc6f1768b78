//! Batch front end: evaluate mask pairs, count layer connectivity, and
//! generate synthetic masks.

mod commands;
mod inputs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{cmd_connectivity, cmd_evaluate, cmd_synth, SynthSidecar};

/// Environment variable that overrides the default report format.
pub const FORMAT_ENV: &str = "ICEMETRICS_FORMAT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io { .. } => 3,
        }
    }

    pub(crate) fn config(msg: impl std::fmt::Display) -> Self {
        Self::Config(msg.to_string())
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            context: context.into(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "icemetrics", version, about = "Evaluate ice-sheet layer annotation masks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare predicted masks against ground-truth masks.
    Evaluate(EvaluateArgs),
    /// Count continuous, broken and total layers per mask.
    Connectivity(ConnectivityArgs),
    /// Write synthetic masks plus a JSON sidecar of their connectivity.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// csv, md or json.
    #[arg(long, env = FORMAT_ENV, default_value = "md")]
    pub format: String,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// sample (n-1) or population (n) standard deviation.
    #[arg(long, default_value = "sample")]
    pub std_mode: String,
    /// Label for the aggregate row.
    #[arg(long, default_value = "mean±std")]
    pub method: String,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Grayscale binarization threshold for PGM inputs.
    #[arg(long, default_value_t = icemetrics::io::DEFAULT_THRESHOLD)]
    pub threshold: u8,
}

#[derive(Debug, Clone, Args)]
pub struct SpanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub min_span_fraction: f64,
    #[arg(long, default_value_t = 1)]
    pub min_layer_pixels: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Predicted mask file, or a directory of them.
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth mask file, or a directory paired by filename.
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long, default_value_t = 11)]
    pub ssim_window: usize,
    #[arg(long, default_value_t = 5)]
    pub dip_window: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub c1: f64,
    #[arg(long, default_value_t = 9e-4)]
    pub c2: f64,
    /// positive or all.
    #[arg(long, default_value = "positive")]
    pub iou_threshold_mode: String,
    #[command(flatten)]
    pub span: SpanArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConnectivityArgs {
    /// Mask file or directory of masks.
    #[arg(long)]
    pub mask: PathBuf,
    #[command(flatten)]
    pub span: SpanArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub n_layers: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub base_slope: f64,
    #[arg(long, default_value_t = 0.0)]
    pub break_prob: f64,
    /// Seed of the first mask; mask `i` uses `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// pgm (binary P5), pgm-ascii (P2) or csv.
    #[arg(long, default_value = "pgm")]
    pub mask_format: String,
}

/// Runs one parsed invocation, writing the report where requested.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let (text, out) = match cli.command {
        Command::Evaluate(args) => (cmd_evaluate(&args)?, args.output.out),
        Command::Connectivity(args) => (cmd_connectivity(&args)?, args.output.out),
        Command::Synth(args) => {
            let sidecar = cmd_synth(&args)?;
            eprintln!(
                "wrote {} masks and oracle.json to {}",
                sidecar.masks.len(),
                args.out_dir.display()
            );
            return Ok(());
        }
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
