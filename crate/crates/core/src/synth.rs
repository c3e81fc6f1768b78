//! Synthetic layer masks with a known connectivity answer.
//!
//! Each layer lives in its own horizontal band. Bands are separated by at
//! least one empty row, so layers never touch (not even diagonally) and the
//! generator knows exactly how many components it drew.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::ConnectivityReport;
use crate::mask::BinaryMask;

const SLOPE_JITTER: f64 = 0.25;
const MAX_SEGMENTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub rows: usize,
    pub cols: usize,
    pub n_layers: usize,
    /// Mean dip in rows per trace; clamped to [-1, 1] after jitter.
    pub base_slope: f64,
    /// Probability that a layer receives one gap of one or more columns.
    pub break_prob: f64,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("mask dimensions must be at least 1x1, got {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },
    #[error("break probability must lie in [0, 1], got {0}")]
    InvalidBreakProb(f64),
    #[error("base slope must be finite, got {0}")]
    InvalidSlope(f64),
    #[error("{n_layers} layers cannot be placed without overlap in {rows} rows")]
    Unplaceable { n_layers: usize, rows: usize },
}

/// A generated mask together with the connectivity triple it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthMask {
    pub mask: BinaryMask,
    pub oracle: ConnectivityReport,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(SynthError::InvalidDimensions {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !(0.0..=1.0).contains(&self.break_prob) {
            return Err(SynthError::InvalidBreakProb(self.break_prob));
        }
        if !self.base_slope.is_finite() {
            return Err(SynthError::InvalidSlope(self.base_slope));
        }
        if self.n_layers > 0 && self.band_height() < 2 {
            return Err(SynthError::Unplaceable {
                n_layers: self.n_layers,
                rows: self.rows,
            });
        }
        Ok(())
    }

    /// Rows per band including the trailing separator row. The last band's
    /// separator may fall off the bottom of the mask.
    fn band_height(&self) -> usize {
        (self.rows + 1) / self.n_layers.max(1)
    }
}

pub fn synth_mask(spec: &SynthSpec) -> Result<SynthMask, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut mask = BinaryMask::zeros(spec.rows, spec.cols).expect("validated dimensions");
    let (mut cl, mut dl) = (0, 0);
    if spec.n_layers == 0 {
        return Ok(SynthMask {
            mask,
            oracle: ConnectivityReport::default(),
        });
    }

    let band = spec.band_height();
    let span = band - 2;
    for layer in 0..spec.n_layers {
        let top = layer * band;
        let path = layer_path(spec.cols, span, spec.base_slope, &mut rng);

        let gap = if spec.cols >= 2 && rng.random_bool(spec.break_prob) {
            let max_width = (spec.cols / 4).clamp(1, spec.cols - 1);
            let width = rng.random_range(1..=max_width);
            let start = rng.random_range(0..=spec.cols - width);
            Some(start..start + width)
        } else {
            None
        };

        for (col, &offset) in path.iter().enumerate() {
            if gap.as_ref().is_some_and(|g| g.contains(&col)) {
                continue;
            }
            mask.set(top + offset, col, true);
        }

        match gap {
            None => cl += 1,
            Some(g) => {
                dl += usize::from(g.start > 0) + usize::from(g.end < spec.cols);
            }
        }
    }

    Ok(SynthMask {
        mask,
        oracle: ConnectivityReport::new(cl, dl),
    })
}

/// Row offset within `[0, span]` for every column. Consecutive offsets differ
/// by at most one, so an unbroken path is a single 8-connected component.
fn layer_path(cols: usize, span: usize, base_slope: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n_segments = rng.random_range(1..=MAX_SEGMENTS.min(cols));
    let mut breakpoints: Vec<usize> = (0..n_segments - 1)
        .map(|_| rng.random_range(1..cols.max(2)))
        .collect();
    breakpoints.sort_unstable();
    let slopes: Vec<f64> = (0..n_segments)
        .map(|_| {
            let jitter = rng.random_range(-SLOPE_JITTER..=SLOPE_JITTER);
            (base_slope + jitter).clamp(-1.0, 1.0)
        })
        .collect();

    let mut pos = if span == 0 {
        0.0
    } else {
        rng.random_range(0.0..=span as f64)
    };
    let mut segment = 0;
    let mut offsets = Vec::with_capacity(cols);
    for col in 0..cols {
        offsets.push(fold(pos, span));
        while segment < breakpoints.len() && breakpoints[segment] <= col + 1 {
            segment += 1;
        }
        pos += slopes[segment];
    }
    offsets
}

/// Reflects `pos` into `[0, span]` (a triangle wave, which is 1-Lipschitz).
fn fold(pos: f64, span: usize) -> usize {
    if span == 0 {
        return 0;
    }
    let span = span as f64;
    let period = 2.0 * span;
    let x = pos.rem_euclid(period);
    let folded = if x > span { period - x } else { x };
    (folded.round() as usize).min(span as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SynthSpec {
        SynthSpec {
            rows: 64,
            cols: 128,
            n_layers: 8,
            base_slope: 0.3,
            break_prob: 0.0,
            seed: 11,
        }
    }

    #[test]
    fn no_breaks_means_full_width_layers() {
        let out = synth_mask(&spec()).unwrap();
        assert_eq!(out.oracle, ConnectivityReport::new(8, 0));
        for c in 0..128 {
            let per_col = (0..64).filter(|&r| out.mask.get(r, c)).count();
            assert_eq!(per_col, 8);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let s = SynthSpec {
            break_prob: 0.5,
            ..spec()
        };
        assert_eq!(synth_mask(&s).unwrap(), synth_mask(&s).unwrap());
        let other = SynthSpec { seed: 12, ..s };
        assert_ne!(synth_mask(&s).unwrap().mask, synth_mask(&other).unwrap().mask);
    }

    #[test]
    fn zero_layers() {
        let out = synth_mask(&SynthSpec {
            n_layers: 0,
            ..spec()
        })
        .unwrap();
        assert_eq!(out.mask.count_ones(), 0);
        assert_eq!(out.oracle, ConnectivityReport::default());
    }

    #[test]
    fn unplaceable() {
        let s = SynthSpec {
            rows: 64,
            n_layers: 200,
            ..spec()
        };
        assert_eq!(
            synth_mask(&s),
            Err(SynthError::Unplaceable {
                n_layers: 200,
                rows: 64
            })
        );
        // 2n - 1 rows is the tightest packing.
        assert!(synth_mask(&SynthSpec { rows: 15, n_layers: 8, ..spec() }).is_ok());
        assert!(synth_mask(&SynthSpec { rows: 14, n_layers: 8, ..spec() }).is_err());
    }

    #[test]
    fn invalid_fields() {
        assert!(synth_mask(&SynthSpec { break_prob: 1.5, ..spec() }).is_err());
        assert!(synth_mask(&SynthSpec { base_slope: f64::NAN, ..spec() }).is_err());
        assert!(synth_mask(&SynthSpec { cols: 0, ..spec() }).is_err());
    }

    #[test]
    fn fold_is_bounded() {
        for i in -100..100 {
            let v = fold(i as f64 * 0.37, 5);
            assert!(v <= 5);
        }
        assert_eq!(fold(7.0, 5), 3);
        assert_eq!(fold(-2.0, 5), 2);
    }
}
