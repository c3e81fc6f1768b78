//! Mean structural similarity over uniform square windows.
//!
//! Every fully interior window position (stride 1) is scored with
//!
//! ```text
//! ((2 mu_x mu_y + c1)(2 cov_xy + c2)) / ((mu_x^2 + mu_y^2 + c1)(var_x + var_y + c2))
//! ```
//!
//! using population (divide by N) moments, and the scores are averaged.
//! Window sums come from integer summed-area tables.

use super::{same_dims, MetricError};
use crate::mask::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub window_size: usize,
    pub c1: f64,
    pub c2: f64,
}

impl Default for SsimParams {
    /// 11x11 window, `c1 = (0.01 L)^2`, `c2 = (0.03 L)^2` with `L = 1`.
    fn default() -> Self {
        Self {
            window_size: 11,
            c1: 1e-4,
            c2: 9e-4,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<(), MetricError> {
        if self.window_size == 0 {
            return Err(MetricError::InvalidParameter(
                "SSIM window must be positive".into(),
            ));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite() && self.c2 > 0.0 && self.c2.is_finite()) {
            return Err(MetricError::InvalidParameter(format!(
                "SSIM constants must be positive, got c1={} c2={}",
                self.c1, self.c2
            )));
        }
        Ok(())
    }
}

/// Summed-area table with a zero top row and left column.
struct Integral {
    stride: usize,
    sums: Vec<u64>,
}

impl Integral {
    fn new(rows: usize, cols: usize, value: impl Fn(usize) -> u64) -> Self {
        let stride = cols + 1;
        let mut sums = vec![0u64; (rows + 1) * stride];
        for r in 0..rows {
            let mut row_sum = 0;
            for c in 0..cols {
                row_sum += value(r * cols + c);
                sums[(r + 1) * stride + c + 1] = sums[r * stride + c + 1] + row_sum;
            }
        }
        Self { stride, sums }
    }

    fn window(&self, r: usize, c: usize, size: usize) -> u64 {
        let s = self.stride;
        let (r1, c1) = (r + size, c + size);
        self.sums[r1 * s + c1] + self.sums[r * s + c] - self.sums[r * s + c1] - self.sums[r1 * s + c]
    }
}

pub fn ssim(mask_a: &BinaryMask, mask_gt: &BinaryMask, params: &SsimParams) -> Result<f64, MetricError> {
    same_dims(mask_a, mask_gt)?;
    params.validate()?;
    let (rows, cols) = mask_a.dims();
    let w = params.window_size;
    if w > rows.min(cols) {
        return Err(MetricError::InvalidWindow { window: w, rows, cols });
    }

    let (xa, xg) = (mask_a.cells(), mask_gt.cells());
    // Binary cells: x^2 == x, so the squared-sum tables are the plain ones.
    let sum_a = Integral::new(rows, cols, |i| xa[i] as u64);
    let sum_g = Integral::new(rows, cols, |i| xg[i] as u64);
    let sum_ag = Integral::new(rows, cols, |i| (xa[i] & xg[i]) as u64);

    let n = (w * w) as f64;
    let (c1, c2) = (params.c1, params.c2);
    let mut total = 0.0;
    for r in 0..=rows - w {
        for c in 0..=cols - w {
            let sa = sum_a.window(r, c, w) as f64;
            let sg = sum_g.window(r, c, w) as f64;
            let sag = sum_ag.window(r, c, w) as f64;
            let (mu_a, mu_g) = (sa / n, sg / n);
            let var_a = sa / n - mu_a * mu_a;
            let var_g = sg / n - mu_g * mu_g;
            let cov = sag / n - mu_a * mu_g;
            total += ((2.0 * mu_a * mu_g + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_g * mu_g + c1) * (var_a + var_g + c2));
        }
    }
    let windows = ((rows - w + 1) * (cols - w + 1)) as f64;
    Ok(total / windows)
}
