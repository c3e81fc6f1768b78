use super::{same_dims, MetricError};
use crate::mask::BinaryMask;

/// Fraction of pixels on which both masks agree.
pub fn pixel_accuracy(mask_a: &BinaryMask, mask_gt: &BinaryMask) -> Result<f64, MetricError> {
    same_dims(mask_a, mask_gt)?;
    let matching = mask_a
        .cells()
        .iter()
        .zip(mask_gt.cells())
        .filter(|(a, b)| a == b)
        .count();
    Ok(matching as f64 / mask_a.len() as f64)
}

/// Overlapping positives divided by the ground-truth positives.
pub fn recall_iou(mask_a: &BinaryMask, mask_gt: &BinaryMask) -> Result<f64, MetricError> {
    same_dims(mask_a, mask_gt)?;
    let (overlap, positives) = mask_a
        .cells()
        .iter()
        .zip(mask_gt.cells())
        .fold((0usize, 0usize), |(o, p), (&a, &g)| {
            (o + (a & g) as usize, p + g as usize)
        });
    if positives == 0 {
        return Err(MetricError::UndefinedRecall);
    }
    Ok(overlap as f64 / positives as f64)
}
