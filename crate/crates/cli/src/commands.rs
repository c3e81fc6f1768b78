use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use icemetrics::connectivity::{report_for_layers, ConnectivityParams};
use icemetrics::{
    connectivity_report_with, extract_layers, load_mask, render_table, save_mask, synth_mask,
    vision_report, AbsenceReason, AggregateReport, BinaryMask, ConnectivityReport, InputRow,
    MaskFormat, Metric, MetricError, OutputFormat, SsimParams, StdMode, SynthError, SynthSpec,
    ThresholdMode, VisionParams,
};

use crate::inputs::{resolve_masks, resolve_pairs};
use crate::{CliError, ConnectivityArgs, EvaluateArgs, OutputArgs, SpanArgs, SynthArgs};

struct OutputConfig {
    format: OutputFormat,
    std_mode: StdMode,
}

impl OutputArgs {
    fn parse(&self) -> Result<OutputConfig, CliError> {
        if self.jobs == Some(0) {
            return Err(CliError::config("--jobs must be at least 1"));
        }
        Ok(OutputConfig {
            format: self.format.parse().map_err(CliError::config)?,
            std_mode: self.std_mode.parse().map_err(CliError::config)?,
        })
    }

    /// Runs `f` on a pool bounded by `--jobs`.
    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.unwrap_or(0))
            .build()
            .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

impl SpanArgs {
    fn params(&self) -> Result<ConnectivityParams, CliError> {
        let params = ConnectivityParams {
            min_span_fraction: self.min_span_fraction,
            min_layer_pixels: self.min_layer_pixels,
        };
        params.validate().map_err(CliError::config)?;
        Ok(params)
    }
}

impl EvaluateArgs {
    fn vision_params(&self) -> Result<VisionParams, CliError> {
        let params = VisionParams {
            ssim: SsimParams {
                window_size: self.ssim_window,
                c1: self.c1,
                c2: self.c2,
            },
            dip_window: self.dip_window,
            threshold_mode: self
                .iou_threshold_mode
                .parse::<ThresholdMode>()
                .map_err(CliError::config)?,
        };
        params.validate().map_err(CliError::config)?;
        Ok(params)
    }
}

fn finish(
    method: &str,
    columns: &[Metric],
    mut rows: Vec<InputRow>,
    out: &OutputConfig,
) -> Result<String, CliError> {
    rows.sort_by(|a, b| a.input_id.cmp(&b.input_id));
    let report =
        AggregateReport::new(method, columns, rows, out.std_mode).map_err(CliError::config)?;
    render_table(&report, out.format).map_err(CliError::config)
}

fn evaluate_pair(
    id: &str,
    pred: Result<BinaryMask, impl std::fmt::Display>,
    gt: Result<BinaryMask, impl std::fmt::Display>,
    span: &ConnectivityParams,
    vision: &VisionParams,
) -> InputRow {
    let (pred, gt) = match (pred, gt) {
        (Ok(p), Ok(g)) => (p, g),
        (p, g) => {
            for err in [p.err().map(|e| e.to_string()), g.err().map(|e| e.to_string())]
                .into_iter()
                .flatten()
            {
                eprintln!("warning: {id}: {err}");
            }
            return InputRow::failed(id, &Metric::ALL, AbsenceReason::UnreadableMask);
        }
    };
    let connectivity = report_for_layers(&extract_layers(&pred), pred.cols(), span);
    match vision_report(&pred, &gt, vision) {
        Ok(report) => InputRow::new(id)
            .with_connectivity(&connectivity)
            .with_vision(&report),
        Err(err @ MetricError::DimensionMismatch { .. }) => {
            eprintln!("warning: {id}: {err}");
            InputRow::failed(id, &Metric::VISION, AbsenceReason::DimensionMismatch)
                .with_connectivity(&connectivity)
        }
        // Parameters were validated up front; anything else is a bug.
        Err(err) => unreachable!("unexpected metric error for {id}: {err}"),
    }
}

/// Evaluates every prediction/ground-truth pair and renders the report.
pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<String, CliError> {
    let out = args.output.parse()?;
    let span = args.span.params()?;
    let vision = args.vision_params()?;
    let pairs = resolve_pairs(&args.pred, &args.gt)?;
    let threshold = args.output.threshold;

    let rows = args.output.in_pool(|| {
        pairs
            .par_iter()
            .map(|pair| {
                evaluate_pair(
                    &pair.id,
                    load_mask(&pair.pred, threshold),
                    load_mask(&pair.gt, threshold),
                    &span,
                    &vision,
                )
            })
            .collect::<Vec<_>>()
    })?;
    finish(&args.output.method, &Metric::ALL, rows, &out)
}

pub fn cmd_connectivity(args: &ConnectivityArgs) -> Result<String, CliError> {
    let out = args.output.parse()?;
    let span = args.span.params()?;
    let inputs = resolve_masks(&args.mask)?;
    let threshold = args.output.threshold;

    let rows = args.output.in_pool(|| {
        inputs
            .par_iter()
            .map(|input| match load_mask(&input.path, threshold) {
                Ok(mask) => {
                    let report = connectivity_report_with(&mask, &span).expect("validated");
                    InputRow::new(&input.id).with_connectivity(&report)
                }
                Err(err) => {
                    eprintln!("warning: {}: {err}", input.id);
                    InputRow::failed(&input.id, &Metric::CONNECTIVITY, AbsenceReason::UnreadableMask)
                }
            })
            .collect::<Vec<_>>()
    })?;
    finish(&args.output.method, &Metric::CONNECTIVITY, rows, &out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarEntry {
    pub file: String,
    pub seed: u64,
    #[serde(flatten)]
    pub oracle: ConnectivityReport,
}

/// Contents of `oracle.json` written next to synthetic masks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSidecar {
    pub rows: usize,
    pub cols: usize,
    pub n_layers: usize,
    pub base_slope: f64,
    pub break_prob: f64,
    pub masks: Vec<SidecarEntry>,
}

pub fn cmd_synth(args: &SynthArgs) -> Result<SynthSidecar, CliError> {
    let format = match args.mask_format.as_str() {
        "pgm" => MaskFormat::PgmBinary,
        "pgm-ascii" => MaskFormat::PgmAscii,
        "csv" => MaskFormat::Csv,
        other => return Err(CliError::config(format!("unknown mask format {other:?}"))),
    };
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(format!("creating {}", args.out_dir.display()), e))?;

    let mut masks = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i as u64);
        let spec = SynthSpec {
            rows: args.rows,
            cols: args.cols,
            n_layers: args.n_layers,
            base_slope: args.base_slope,
            break_prob: args.break_prob,
            seed,
        };
        let out = synth_mask(&spec).map_err(|e: SynthError| CliError::config(e))?;
        let file = format!("synth_{i:04}.{}", format.extension());
        save_mask(&out.mask, args.out_dir.join(&file), format).map_err(|e| match e {
            icemetrics::MaskIoError::Io { path, source } => {
                CliError::io(format!("writing {}", path.display()), source)
            }
            other => CliError::config(other),
        })?;
        masks.push(SidecarEntry {
            file,
            seed,
            oracle: out.oracle,
        });
    }

    let sidecar = SynthSidecar {
        rows: args.rows,
        cols: args.cols,
        n_layers: args.n_layers,
        base_slope: args.base_slope,
        break_prob: args.break_prob,
        masks,
    };
    let path = args.out_dir.join("oracle.json");
    let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    Ok(sidecar)
}
