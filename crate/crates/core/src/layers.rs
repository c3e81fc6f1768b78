//! Layer extraction: 8-connected components of the positive pixels.
//!
//! Labelling is the classic two-pass scheme over a union-find forest. Dipping
//! layers step diagonally between neighbouring traces, so diagonal neighbours
//! are joined.

use crate::mask::BinaryMask;

/// One traced isochrone segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    id: usize,
    pixels: Vec<(usize, usize)>,
    row_min: usize,
    col_min: usize,
    col_max: usize,
}

impl Layer {
    /// Position of this layer in the ordered output of [`extract_layers`].
    pub fn id(&self) -> usize {
        self.id
    }

    /// `(row, col)` coordinates in raster order.
    pub fn pixels(&self) -> &[(usize, usize)] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false for extracted layers.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn row_min(&self) -> usize {
        self.row_min
    }

    pub fn col_min(&self) -> usize {
        self.col_min
    }

    pub fn col_max(&self) -> usize {
        self.col_max
    }

    /// Number of traces covered, `col_max - col_min + 1`.
    pub fn col_span(&self) -> usize {
        self.col_max - self.col_min + 1
    }
}

struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new() -> Self {
        Self {
            parent: Vec::new(),
            rank: Vec::new(),
        }
    }

    fn make_set(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        hi
    }
}

const UNLABELLED: u32 = u32::MAX;

/// Splits the mask's positive pixels into 8-connected layers.
///
/// Layers are ordered by their minimum row, then minimum column; remaining
/// ties fall back to the raster position of each layer's first pixel. Each
/// layer's `id` is its index in the returned list.
pub fn extract_layers(mask: &BinaryMask) -> Vec<Layer> {
    let (rows, cols) = mask.dims();
    let cells = mask.cells();
    let mut labels = vec![UNLABELLED; rows * cols];
    let mut sets = DisjointSet::new();

    for r in 0..rows {
        for c in 0..cols {
            let idx = r * cols + c;
            if cells[idx] == 0 {
                continue;
            }
            // Already-visited neighbours: W, NW, N, NE.
            let mut label = UNLABELLED;
            let mut join = |other: u32, label: &mut u32| {
                if other == UNLABELLED {
                    return;
                }
                *label = if *label == UNLABELLED {
                    other
                } else {
                    sets.union(*label, other)
                };
            };
            if c > 0 {
                join(labels[idx - 1], &mut label);
            }
            if r > 0 {
                let up = idx - cols;
                if c > 0 {
                    join(labels[up - 1], &mut label);
                }
                join(labels[up], &mut label);
                if c + 1 < cols {
                    join(labels[up + 1], &mut label);
                }
            }
            labels[idx] = if label == UNLABELLED {
                sets.make_set()
            } else {
                label
            };
        }
    }

    // Second pass: resolve roots and gather pixels in raster order.
    let mut slot_of_root = vec![UNLABELLED; sets.parent.len()];
    let mut layers: Vec<Layer> = Vec::new();
    for (idx, &label) in labels.iter().enumerate() {
        if label == UNLABELLED {
            continue;
        }
        let root = sets.find(label) as usize;
        let (r, c) = (idx / cols, idx % cols);
        if slot_of_root[root] == UNLABELLED {
            slot_of_root[root] = layers.len() as u32;
            layers.push(Layer {
                id: 0,
                pixels: Vec::new(),
                row_min: r,
                col_min: c,
                col_max: c,
            });
        }
        let layer = &mut layers[slot_of_root[root] as usize];
        layer.pixels.push((r, c));
        layer.col_min = layer.col_min.min(c);
        layer.col_max = layer.col_max.max(c);
    }

    // `layers` is already in first-pixel raster order, so a stable sort
    // supplies the final tie-break.
    layers.sort_by_key(|l| (l.row_min, l.col_min));
    for (id, layer) in layers.iter_mut().enumerate() {
        layer.id = id;
    }
    layers
}
