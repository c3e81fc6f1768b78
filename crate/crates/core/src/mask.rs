//! Binary annotation masks.
//!
//! Rows run along depth (fast-time samples) and columns along traces. Cells
//! hold `0` for background and `1` for annotated layer pixels.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MaskError {
    #[error("mask dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("expected {expected} cells for a {rows}x{cols} mask, got {actual}")]
    CellCountMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("cell {index} holds {value}, expected 0 or 1")]
    NonBinaryCell { index: usize, value: u8 },
    #[error("pixel ({row}, {col}) lies outside a {rows}x{cols} mask")]
    PixelOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A 2D binary grid stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, cells: Vec<u8>) -> Result<Self, MaskError> {
        check_dims(rows, cols)?;
        if cells.len() != rows * cols {
            return Err(MaskError::CellCountMismatch {
                rows,
                cols,
                expected: rows * cols,
                actual: cells.len(),
            });
        }
        if let Some((index, &value)) = cells.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(MaskError::NonBinaryCell { index, value });
        }
        Ok(Self { rows, cols, cells })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, MaskError> {
        check_dims(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            cells: vec![0; rows * cols],
        })
    }

    /// Builds a mask by evaluating `f(row, col)` for every cell.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, MaskError> {
        check_dims(rows, cols)?;
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(u8::from(f(r, c)));
            }
        }
        Ok(Self { rows, cols, cells })
    }

    /// Builds a mask with the given `(row, col)` pixels set.
    pub fn from_pixels(
        rows: usize,
        cols: usize,
        pixels: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MaskError> {
        let mut mask = Self::zeros(rows, cols)?;
        for (row, col) in pixels {
            if row >= rows || col >= cols {
                return Err(MaskError::PixelOutOfBounds {
                    row,
                    col,
                    rows,
                    cols,
                });
            }
            mask.cells[row * cols + col] = 1;
        }
        Ok(mask)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Total pixel count, `rows * cols`.
    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Always false: a mask has at least one cell.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Panics if the coordinate is out of bounds.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "pixel out of bounds");
        self.cells[row * self.cols + col] == 1
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().map(|&v| v as usize).sum()
    }

    pub fn complement(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|&v| 1 - v).collect(),
        }
    }

    /// Mirror left-right.
    pub fn flip_cols(&self) -> Self {
        let mut cells = Vec::with_capacity(self.cells.len());
        for row in self.cells.chunks_exact(self.cols) {
            cells.extend(row.iter().rev());
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(move |(i, _)| (i / cols, i % cols))
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cells[row * self.cols + col] = u8::from(value);
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<(), MaskError> {
    if rows == 0 || cols == 0 {
        Err(MaskError::EmptyDimensions { rows, cols })
    } else {
        Ok(())
    }
}

impl fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMask {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 * 64 {
            for row in self.cells.chunks_exact(self.cols) {
                let line: String = row.iter().map(|&v| if v == 1 { '#' } else { '.' }).collect();
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}
