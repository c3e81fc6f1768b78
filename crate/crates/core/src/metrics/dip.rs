//! Local dip estimation from layer edges.
//!
//! Inside a square window around each pixel, every column contributes the
//! rows where the mask switches from 0 to 1 scanning downward, i.e. where a
//! layer is entered from above. The cell at the window's top row has no
//! predecessor inside the window and therefore never counts. Points are
//! ordered by `(col, row)`; each consecutive pair lying in different columns
//! yields `atan2(d_row, d_col)`, and the pixel's dip is the mean of those
//! angles. Windows are clipped at the image border. Pixels without such a
//! pair keep dip 0.

use super::{pearson, same_dims, MetricError};
use crate::mask::BinaryMask;

/// Per-pixel mean dip angle in radians. Positive dips descend (row grows)
/// left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct DipField {
    rows: usize,
    cols: usize,
    window_size: usize,
    angles: Vec<f64>,
}

impl DipField {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    /// Row-major angles.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angle(&self, row: usize, col: usize) -> f64 {
        self.angles[row * self.cols + col]
    }
}

fn check_window(mask: &BinaryMask, window: usize) -> Result<(), MetricError> {
    let (rows, cols) = mask.dims();
    if window < 3 || window.is_multiple_of(2) || window > rows.min(cols) {
        return Err(MetricError::InvalidWindow { window, rows, cols });
    }
    Ok(())
}

pub fn dip_field(mask: &BinaryMask, window_size: usize) -> Result<DipField, MetricError> {
    check_window(mask, window_size)?;
    let (rows, cols) = mask.dims();
    let half = window_size / 2;

    // 0->1 edges per column, ascending by row.
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for r in 1..rows {
        for (c, col_edges) in edges.iter_mut().enumerate() {
            if mask.get(r, c) && !mask.get(r - 1, c) {
                col_edges.push(r);
            }
        }
    }

    let mut angles = vec![0.0; rows * cols];
    for r in 0..rows {
        let top = r.saturating_sub(half);
        let bottom = (r + half).min(rows - 1);
        for c in 0..cols {
            let left = c.saturating_sub(half);
            let right = (c + half).min(cols - 1);

            let mut prev: Option<(usize, usize)> = None;
            let (mut sum, mut count) = (0.0, 0usize);
            for (col, col_edges) in edges[left..=right].iter().enumerate() {
                let col = col + left;
                let start = col_edges.partition_point(|&e| e <= top);
                for &row in col_edges[start..].iter().take_while(|&&e| e <= bottom) {
                    if let Some((prev_row, prev_col)) = prev {
                        if prev_col != col {
                            let d_row = row as f64 - prev_row as f64;
                            let d_col = (col - prev_col) as f64;
                            sum += d_row.atan2(d_col);
                            count += 1;
                        }
                    }
                    prev = Some((row, col));
                }
            }
            if count > 0 {
                angles[r * cols + c] = sum / count as f64;
            }
        }
    }

    Ok(DipField {
        rows,
        cols,
        window_size,
        angles,
    })
}

/// Pearson correlation between the flattened dip fields of two masks.
pub fn dip_correlation(
    mask_a: &BinaryMask,
    mask_gt: &BinaryMask,
    window_size: usize,
) -> Result<f64, MetricError> {
    same_dims(mask_a, mask_gt)?;
    let dip_a = dip_field(mask_a, window_size)?;
    let dip_gt = dip_field(mask_gt, window_size)?;
    pearson(dip_a.angles(), dip_gt.angles())
}
