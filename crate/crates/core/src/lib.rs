//! Quantitative metrics for ice-sheet layer annotations.
//!
//! A predicted binary layer mask is compared with a ground-truth mask of the
//! same radargram. Rows are depth samples and columns are traces.
//!
//! * [`connectivity`]: counts of continuous, broken and total layers.
//! * [`metrics`]: pixel accuracy, dip correlation, SSIM, recall IoU and
//!   layer-by-layer recall IoU.
//! * [`report`]: mean ± std aggregation and CSV / Markdown / JSON tables.
//! * [`synth`]: synthetic masks with a known connectivity answer.

pub mod connectivity;
pub mod io;
pub mod layers;
pub mod mask;
pub mod metrics;
pub mod report;
pub mod synth;

pub use connectivity::{
    connectivity_report, connectivity_report_with, ConnectivityParams, ConnectivityReport,
};
pub use io::{load_mask, save_mask, MaskFormat, MaskIoError};
pub use layers::{extract_layers, Layer};
pub use mask::{BinaryMask, MaskError};
pub use metrics::{
    dip_correlation, dip_field, layer_iou_matrix, layer_recall_iou, pearson, pixel_accuracy,
    recall_iou, ssim, vision_report, AbsenceReason, DipField, IouScores, Measurement,
    MetricError, SsimParams, ThresholdMode, VisionParams, VisionReport,
};
pub use report::{
    aggregate, aggregate_with, render_table, AggregateReport, InputRow, MeanStd, Metric,
    OutputFormat, ReportError, StdMode,
};
pub use synth::{synth_mask, SynthError, SynthMask, SynthSpec};
