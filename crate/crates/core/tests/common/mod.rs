//! Naive reference implementations used as test oracles. Each one recomputes
//! its quantity from first principles without sharing code with the library.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use icemetrics::{BinaryMask, Layer};

/// 8-connected components by breadth-first flood fill, ordered by
/// (min row, min col, first raster pixel). Pixel lists are raster-sorted.
pub fn flood_fill_components(mask: &BinaryMask) -> Vec<Vec<(usize, usize)>> {
    let (rows, cols) = mask.dims();
    let mut seen = vec![false; rows * cols];
    let mut comps = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if !mask.get(r, c) || seen[r * cols + c] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([(r, c)]);
            seen[r * cols + c] = true;
            while let Some((y, x)) = queue.pop_front() {
                comp.push((y, x));
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (ny, nx) = (y as i64 + dy, x as i64 + dx);
                        if ny < 0 || nx < 0 || ny >= rows as i64 || nx >= cols as i64 {
                            continue;
                        }
                        let (ny, nx) = (ny as usize, nx as usize);
                        if mask.get(ny, nx) && !seen[ny * cols + nx] {
                            seen[ny * cols + nx] = true;
                            queue.push_back((ny, nx));
                        }
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
    }
    // Discovery order is raster order of first pixels; the stable sort keeps
    // that as the final tie-break.
    comps.sort_by_key(|comp| {
        let min_row = comp.iter().map(|p| p.0).min().unwrap();
        let min_col = comp.iter().map(|p| p.1).min().unwrap();
        (min_row, min_col)
    });
    comps
}

pub fn naive_accuracy(a: &BinaryMask, b: &BinaryMask) -> f64 {
    let mut same = 0;
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) == b.get(r, c) {
                same += 1;
            }
        }
    }
    same as f64 / (a.rows() * a.cols()) as f64
}

pub fn naive_recall(a: &BinaryMask, gt: &BinaryMask) -> Option<f64> {
    let (mut both, mut pos) = (0, 0);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if gt.get(r, c) {
                pos += 1;
                if a.get(r, c) {
                    both += 1;
                }
            }
        }
    }
    (pos > 0).then(|| both as f64 / pos as f64)
}

/// Window-by-window SSIM with two-pass population moments.
pub fn naive_ssim(a: &BinaryMask, b: &BinaryMask, w: usize, c1: f64, c2: f64) -> f64 {
    let (rows, cols) = a.dims();
    let mut scores = Vec::new();
    for top in 0..=rows - w {
        for left in 0..=cols - w {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for r in top..top + w {
                for c in left..left + w {
                    xs.push(a.get(r, c) as u8 as f64);
                    ys.push(b.get(r, c) as u8 as f64);
                }
            }
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let vx = xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>() / n;
            let vy = ys.iter().map(|y| (y - my).powi(2)).sum::<f64>() / n;
            let cov = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / n;
            scores.push(
                ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2)),
            );
        }
    }
    scores.iter().sum::<f64>() / scores.len() as f64
}

/// IoU of every layer pair via hash sets.
pub fn naive_layer_iou(a: &[Layer], gt: &[Layer]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|la| {
            let sa: HashSet<_> = la.pixels().iter().copied().collect();
            gt.iter()
                .map(|lg| {
                    let sg: HashSet<_> = lg.pixels().iter().copied().collect();
                    let inter = sa.intersection(&sg).count();
                    let union = sa.union(&sg).count();
                    inter as f64 / union as f64
                })
                .collect()
        })
        .collect()
}

/// Deterministic pseudo-random mask (xorshift), independent of `rand`.
pub fn noise_mask(rows: usize, cols: usize, density_percent: u64, seed: u64) -> BinaryMask {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    BinaryMask::from_fn(rows, cols, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % 100 < density_percent
    })
    .unwrap()
}
