//! Isochrone connectivity: counts of continuous, broken and total layers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layers::{extract_layers, Layer};
use crate::mask::BinaryMask;

/// `(#CL, #DL, #TL)` for one mask. `tl == cl + dl` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub cl: usize,
    pub dl: usize,
    pub tl: usize,
}

impl ConnectivityReport {
    pub fn new(cl: usize, dl: usize) -> Self {
        Self { cl, dl, tl: cl + dl }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConnectivityError {
    #[error("min span fraction must lie in (0, 1], got {0}")]
    InvalidSpanFraction(f64),
    #[error("min layer pixels must be at least 1")]
    InvalidMinPixels,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityParams {
    /// Fraction of the mask width a layer must cover to count as continuous.
    pub min_span_fraction: f64,
    /// Components smaller than this are dropped before counting.
    pub min_layer_pixels: usize,
}

impl Default for ConnectivityParams {
    fn default() -> Self {
        Self {
            min_span_fraction: 1.0,
            min_layer_pixels: 1,
        }
    }
}

impl ConnectivityParams {
    pub fn validate(&self) -> Result<(), ConnectivityError> {
        if !(self.min_span_fraction > 0.0 && self.min_span_fraction <= 1.0) {
            return Err(ConnectivityError::InvalidSpanFraction(self.min_span_fraction));
        }
        if self.min_layer_pixels == 0 {
            return Err(ConnectivityError::InvalidMinPixels);
        }
        Ok(())
    }

    fn is_continuous(&self, layer: &Layer, cols: usize) -> bool {
        // A full fraction means col_min == 0 and col_max == cols - 1.
        if self.min_span_fraction >= 1.0 {
            return layer.col_span() == cols;
        }
        layer.col_span() as f64 >= self.min_span_fraction * cols as f64
    }
}

/// Connectivity with full-width continuity and no size filter.
pub fn connectivity_report(mask: &BinaryMask) -> ConnectivityReport {
    report_for_layers(&extract_layers(mask), mask.cols(), &ConnectivityParams::default())
}

pub fn connectivity_report_with(
    mask: &BinaryMask,
    params: &ConnectivityParams,
) -> Result<ConnectivityReport, ConnectivityError> {
    params.validate()?;
    Ok(report_for_layers(&extract_layers(mask), mask.cols(), params))
}

/// Counts already-extracted layers of a mask `cols` traces wide.
pub fn report_for_layers(
    layers: &[Layer],
    cols: usize,
    params: &ConnectivityParams,
) -> ConnectivityReport {
    let (cl, dl) = layers
        .iter()
        .filter(|l| l.len() >= params.min_layer_pixels)
        .fold((0, 0), |(cl, dl), layer| {
            if params.is_continuous(layer, cols) {
                (cl + 1, dl)
            } else {
                (cl, dl + 1)
            }
        });
    ConnectivityReport::new(cl, dl)
}
