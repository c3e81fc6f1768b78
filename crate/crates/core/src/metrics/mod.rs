//! Pairwise vision metrics between a predicted mask and a ground-truth mask.

mod accuracy;
mod dip;
mod layer_iou;
mod pearson;
mod ssim;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::layers::extract_layers;
use crate::mask::BinaryMask;

pub use accuracy::{pixel_accuracy, recall_iou};
pub use dip::{dip_correlation, dip_field, DipField};
pub use layer_iou::{layer_iou_matrix, layer_recall_iou, IouScores, ThresholdMode};
pub use pearson::pearson;
pub use ssim::{ssim, SsimParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("mask dimensions differ: {a:?} vs {b:?}")]
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("correlation undefined: an input has zero variance")]
    UndefinedCorrelation,
    #[error("recall undefined: ground truth has no positive pixels")]
    UndefinedRecall,
    #[error("no overlapping layer pair to select")]
    NoOverlappingLayers,
    #[error("window size {window} is invalid for a {rows}x{cols} mask")]
    InvalidWindow {
        window: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub(crate) fn same_dims(a: &BinaryMask, b: &BinaryMask) -> Result<(), MetricError> {
    if a.dims() == b.dims() {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch {
            a: a.dims(),
            b: b.dims(),
        })
    }
}

/// Why a metric has no value for an input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbsenceReason {
    UndefinedCorrelation,
    UndefinedRecall,
    NoOverlappingLayers,
    WindowTooLarge,
    DimensionMismatch,
    UnreadableMask,
}

impl AbsenceReason {
    pub fn code(self) -> &'static str {
        match self {
            Self::UndefinedCorrelation => "undefined-correlation",
            Self::UndefinedRecall => "undefined-recall",
            Self::NoOverlappingLayers => "no-overlapping-layers",
            Self::WindowTooLarge => "window-too-large",
            Self::DimensionMismatch => "dimension-mismatch",
            Self::UnreadableMask => "unreadable-mask",
        }
    }

    /// Maps the metric errors that make a value undefined for one input.
    pub fn from_error(err: &MetricError) -> Option<Self> {
        match err {
            MetricError::UndefinedCorrelation => Some(Self::UndefinedCorrelation),
            MetricError::UndefinedRecall => Some(Self::UndefinedRecall),
            MetricError::NoOverlappingLayers => Some(Self::NoOverlappingLayers),
            MetricError::InvalidWindow { .. } => Some(Self::WindowTooLarge),
            MetricError::DimensionMismatch { .. } => Some(Self::DimensionMismatch),
            _ => None,
        }
    }
}

impl fmt::Display for AbsenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for AbsenceReason {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

/// A metric value, or the reason it could not be computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurement {
    Value(f64),
    Absent(AbsenceReason),
}

impl Measurement {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Value(v) => Some(v),
            Self::Absent(_) => None,
        }
    }

    pub fn is_absent(self) -> bool {
        matches!(self, Self::Absent(_))
    }
}

impl Serialize for Measurement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Self::Value(v) => s.serialize_f64(*v),
            Self::Absent(reason) => {
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("absent", reason)?;
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisionParams {
    pub ssim: SsimParams,
    pub dip_window: usize,
    pub threshold_mode: ThresholdMode,
}

impl Default for VisionParams {
    fn default() -> Self {
        Self {
            ssim: SsimParams::default(),
            dip_window: 5,
            threshold_mode: ThresholdMode::Positive,
        }
    }
}

impl VisionParams {
    /// Checks parameters that do not depend on the mask size.
    pub fn validate(&self) -> Result<(), MetricError> {
        self.ssim.validate()?;
        if self.dip_window < 3 || self.dip_window.is_multiple_of(2) {
            return Err(MetricError::InvalidParameter(format!(
                "dip window must be odd and at least 3, got {}",
                self.dip_window
            )));
        }
        Ok(())
    }
}

/// `(rho, SSIM, Acc, IoU_r, IoU_r^l)` for one mask pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisionReport {
    pub rho: Measurement,
    pub ssim: Measurement,
    pub acc: Measurement,
    pub iou_r: Measurement,
    pub iou_rl: Measurement,
}

fn measure(result: Result<f64, MetricError>) -> Result<Measurement, MetricError> {
    match result {
        Ok(v) => Ok(Measurement::Value(v)),
        Err(e) => AbsenceReason::from_error(&e)
            .map(Measurement::Absent)
            .ok_or(e),
    }
}

/// Computes all five vision metrics. Only a dimension mismatch or invalid
/// parameters fail the call; undefined sub-metrics come back as
/// [`Measurement::Absent`].
pub fn vision_report(
    mask_a: &BinaryMask,
    mask_gt: &BinaryMask,
    params: &VisionParams,
) -> Result<VisionReport, MetricError> {
    same_dims(mask_a, mask_gt)?;
    params.validate()?;

    let layers_a = extract_layers(mask_a);
    let layers_gt = extract_layers(mask_gt);
    let scores = layer_iou_matrix(&layers_a, &layers_gt);

    Ok(VisionReport {
        rho: measure(dip_correlation(mask_a, mask_gt, params.dip_window))?,
        ssim: measure(ssim(mask_a, mask_gt, &params.ssim))?,
        acc: measure(pixel_accuracy(mask_a, mask_gt))?,
        iou_r: measure(recall_iou(mask_a, mask_gt))?,
        iou_rl: measure(layer_recall_iou(
            &scores,
            &layers_a,
            &layers_gt,
            params.threshold_mode,
        ))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(rows: usize, cols: usize, at: &[usize]) -> BinaryMask {
        BinaryMask::from_fn(rows, cols, |r, _| at.contains(&r)).unwrap()
    }

    fn staircase(rows: usize, cols: usize) -> BinaryMask {
        BinaryMask::from_fn(rows, cols, |r, c| r == (c / 3) % rows || r == 20 + (c / 2) % 6)
            .unwrap()
    }

    #[test]
    fn identity_report() {
        let m = staircase(32, 40);
        let report = vision_report(&m, &m, &VisionParams::default()).unwrap();
        for v in [report.rho, report.ssim, report.acc, report.iou_r, report.iou_rl] {
            let v = v.value().unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn empty_prediction() {
        let gt = lines(16, 16, &[3, 9]);
        let pred = BinaryMask::zeros(16, 16).unwrap();
        let report = vision_report(&pred, &gt, &VisionParams::default()).unwrap();
        assert_eq!(report.acc, Measurement::Value(224.0 / 256.0));
        assert_eq!(report.iou_r, Measurement::Value(0.0));
        assert_eq!(
            report.rho,
            Measurement::Absent(AbsenceReason::UndefinedCorrelation)
        );
        assert_eq!(
            report.iou_rl,
            Measurement::Absent(AbsenceReason::NoOverlappingLayers)
        );
    }

    #[test]
    fn complement_report() {
        let m = staircase(32, 40);
        let report = vision_report(&m.complement(), &m, &VisionParams::default()).unwrap();
        assert_eq!(report.acc, Measurement::Value(0.0));
        assert_eq!(report.iou_r, Measurement::Value(0.0));
    }

    #[test]
    fn small_mask_marks_ssim_absent() {
        let m = lines(6, 6, &[2]);
        let report = vision_report(&m, &m, &VisionParams::default()).unwrap();
        assert_eq!(report.ssim, Measurement::Absent(AbsenceReason::WindowTooLarge));
        assert_eq!(report.acc, Measurement::Value(1.0));
    }

    #[test]
    fn mismatch_and_bad_params_fail() {
        let a = lines(8, 8, &[1]);
        let b = lines(8, 9, &[1]);
        assert!(matches!(
            vision_report(&a, &b, &VisionParams::default()),
            Err(MetricError::DimensionMismatch { .. })
        ));
        let params = VisionParams {
            dip_window: 4,
            ..Default::default()
        };
        assert!(matches!(
            vision_report(&a, &a, &params),
            Err(MetricError::InvalidParameter(_))
        ));
    }

    #[test]
    fn measurement_json() {
        let v = serde_json::to_string(&Measurement::Value(0.5)).unwrap();
        assert_eq!(v, "0.5");
        let a = serde_json::to_string(&Measurement::Absent(AbsenceReason::UndefinedRecall)).unwrap();
        assert_eq!(a, r#"{"absent":"undefined-recall"}"#);
    }
}
