//! Layer-by-layer IoU and the recall over well-matched layer pairs.

use std::collections::HashMap;
use std::str::FromStr;

use super::MetricError;
use crate::layers::Layer;

/// IoU of every (predicted layer, ground-truth layer) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IouScores {
    n_a: usize,
    n_gt: usize,
    scores: Vec<f64>,
}

impl IouScores {
    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_gt(&self) -> usize {
        self.n_gt
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n_a && j < self.n_gt, "layer pair out of range");
        self.scores[i * self.n_gt + j]
    }

    /// Row-major, `n_a` rows by `n_gt` columns.
    pub fn as_slice(&self) -> &[f64] {
        &self.scores
    }
}

/// How the selection threshold is averaged over the score grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    /// Mean of the strictly positive scores.
    #[default]
    Positive,
    /// Mean of every score, zeros included.
    All,
}

impl FromStr for ThresholdMode {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Self::Positive),
            "all" => Ok(Self::All),
            other => Err(MetricError::InvalidParameter(format!(
                "unknown threshold mode {other:?}"
            ))),
        }
    }
}

pub fn layer_iou_matrix(layers_a: &[Layer], layers_gt: &[Layer]) -> IouScores {
    let (n_a, n_gt) = (layers_a.len(), layers_gt.len());
    let mut scores = vec![0.0; n_a * n_gt];
    if n_a == 0 || n_gt == 0 {
        return IouScores { n_a, n_gt, scores };
    }

    let owner: HashMap<(usize, usize), usize> = layers_gt
        .iter()
        .enumerate()
        .flat_map(|(j, layer)| layer.pixels().iter().map(move |&p| (p, j)))
        .collect();

    let mut overlap: HashMap<usize, usize> = HashMap::new();
    for (i, layer) in layers_a.iter().enumerate() {
        overlap.clear();
        for p in layer.pixels() {
            if let Some(&j) = owner.get(p) {
                *overlap.entry(j).or_default() += 1;
            }
        }
        for (&j, &inter) in &overlap {
            let union = layer.len() + layers_gt[j].len() - inter;
            scores[i * n_gt + j] = inter as f64 / union as f64;
        }
    }
    IouScores { n_a, n_gt, scores }
}

/// Size of the intersection of two raster-ordered pixel lists.
fn intersection_len(a: &[(usize, usize)], b: &[(usize, usize)]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Mean recall over layer pairs whose IoU reaches the average IoU.
///
/// Recall of a pair `(i, j)` is `|a_i ∩ gt_j| / |gt_j|`. Pairs with zero IoU
/// are never selected, and a ground-truth layer may appear in several pairs.
pub fn layer_recall_iou(
    scores: &IouScores,
    layers_a: &[Layer],
    layers_gt: &[Layer],
    mode: ThresholdMode,
) -> Result<f64, MetricError> {
    if scores.n_a != layers_a.len() || scores.n_gt != layers_gt.len() {
        return Err(MetricError::InvalidParameter(format!(
            "score grid is {}x{} but there are {} predicted and {} ground-truth layers",
            scores.n_a,
            scores.n_gt,
            layers_a.len(),
            layers_gt.len()
        )));
    }

    let (sum, count) = scores
        .scores
        .iter()
        .filter(|&&s| mode == ThresholdMode::All || s > 0.0)
        .fold((0.0, 0usize), |(sum, n), &s| (sum + s, n + 1));
    if count == 0 {
        return Err(MetricError::NoOverlappingLayers);
    }
    let threshold = sum / count as f64;

    let mut recalls = Vec::new();
    for (i, a) in layers_a.iter().enumerate().take(scores.n_a) {
        for (j, gt) in layers_gt.iter().enumerate().take(scores.n_gt) {
            let s = scores.get(i, j);
            if s > 0.0 && s >= threshold {
                let inter = intersection_len(a.pixels(), gt.pixels());
                recalls.push(inter as f64 / gt.len() as f64);
            }
        }
    }
    if recalls.is_empty() {
        return Err(MetricError::NoOverlappingLayers);
    }
    Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
}
