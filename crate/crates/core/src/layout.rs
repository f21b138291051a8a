//! Storage order for per-particle matrices.
//!
//! Particle-major keeps each particle's coordinates contiguous; interleaved
//! keeps coordinate `j` of every particle contiguous. Logical `(i, j)`
//! indexing is the same either way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutMode {
    #[default]
    ParticleMajor,
    Interleaved,
}

impl LayoutMode {
    #[inline]
    fn offset(self, rows: usize, cols: usize, i: usize, j: usize) -> usize {
        match self {
            LayoutMode::ParticleMajor => i * cols + j,
            LayoutMode::Interleaved => j * rows + i,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LayoutMode::ParticleMajor => "particle-major",
            LayoutMode::Interleaved => "interleaved",
        }
    }
}

impl fmt::Display for LayoutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayoutMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "particle-major" => Ok(LayoutMode::ParticleMajor),
            "interleaved" => Ok(LayoutMode::Interleaved),
            other => Err(format!("unknown layout `{other}` (expected particle-major or interleaved)")),
        }
    }
}

/// Re-orders a `rows x cols` matrix stored in `from` order into `to` order.
pub fn convert_layout(
    data: &[f64],
    rows: usize,
    cols: usize,
    from: LayoutMode,
    to: LayoutMode,
) -> Result<Vec<f64>> {
    let expected = rows * cols;
    if data.len() != expected {
        return Err(SsoError::DimensionMismatch { expected, found: data.len() });
    }
    if from == to {
        return Ok(data.to_vec());
    }
    let mut out = vec![0.0; expected];
    for i in 0..rows {
        for j in 0..cols {
            out[to.offset(rows, cols, i, j)] = data[from.offset(rows, cols, i, j)];
        }
    }
    Ok(out)
}

/// A `rows x cols` matrix of particle coordinates in a chosen layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleMatrix {
    rows: usize,
    cols: usize,
    layout: LayoutMode,
    data: Vec<f64>,
}

impl ParticleMatrix {
    pub fn zeros(rows: usize, cols: usize, layout: LayoutMode) -> Self {
        Self { rows, cols, layout, data: vec![0.0; rows * cols] }
    }

    /// Wraps storage that is already in `layout` order.
    pub fn from_storage(rows: usize, cols: usize, layout: LayoutMode, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(SsoError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, layout, data })
    }

    pub fn from_rows(rows: &[Vec<f64>], layout: LayoutMode) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, layout);
        for (i, row) in rows.iter().enumerate() {
            m.write_row(i, row)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn layout(&self) -> LayoutMode {
        self.layout
    }

    /// Raw storage in this matrix's layout order.
    pub fn storage(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[self.layout.offset(self.rows, self.cols, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        let k = self.layout.offset(self.rows, self.cols, i, j);
        self.data[k] = value;
    }

    /// Borrow row `i` directly; only possible for particle-major storage.
    pub fn row_slice(&self, i: usize) -> Option<&[f64]> {
        match self.layout {
            LayoutMode::ParticleMajor => Some(&self.data[i * self.cols..(i + 1) * self.cols]),
            LayoutMode::Interleaved => None,
        }
    }

    pub fn copy_row_into(&self, i: usize, out: &mut [f64]) {
        match self.row_slice(i) {
            Some(row) => out.copy_from_slice(row),
            None => {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = self.get(i, j);
                }
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.copy_row_into(i, &mut out);
        out
    }

    pub fn write_row(&mut self, i: usize, values: &[f64]) -> Result<()> {
        if values.len() != self.cols {
            return Err(SsoError::DimensionMismatch { expected: self.cols, found: values.len() });
        }
        match self.layout {
            LayoutMode::ParticleMajor => {
                self.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(values)
            }
            LayoutMode::Interleaved => {
                for (j, &v) in values.iter().enumerate() {
                    self.set(i, j, v);
                }
            }
        }
        Ok(())
    }

    /// Copies row `src_row` of `src` into row `i` of `self`.
    pub fn copy_row_from(&mut self, i: usize, src: &ParticleMatrix, src_row: usize) {
        debug_assert_eq!(self.cols, src.cols);
        if let (LayoutMode::ParticleMajor, Some(row)) = (self.layout, src.row_slice(src_row)) {
            self.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(row);
        } else {
            for j in 0..self.cols {
                self.set(i, j, src.get(src_row, j));
            }
        }
    }

    pub fn to_layout(&self, layout: LayoutMode) -> Self {
        let data = convert_layout(&self.data, self.rows, self.cols, self.layout, layout)
            .expect("storage length matches dimensions");
        Self { rows: self.rows, cols: self.cols, layout, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Splits into consecutive row blocks of the given sizes, each kept in
    /// this matrix's layout.
    pub fn split_rows(&self, sizes: &[usize]) -> Vec<ParticleMatrix> {
        debug_assert_eq!(sizes.iter().sum::<usize>(), self.rows);
        let mut start = 0;
        sizes
            .iter()
            .map(|&n| {
                let mut block = ParticleMatrix::zeros(n, self.cols, self.layout);
                for r in 0..n {
                    block.copy_row_from(r, self, start + r);
                }
                start += n;
                block
            })
            .collect()
    }

    /// Inverse of [`split_rows`](Self::split_rows).
    pub fn concat_rows(blocks: &[ParticleMatrix], layout: LayoutMode) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = ParticleMatrix::zeros(rows, cols, layout);
        let mut i = 0;
        for block in blocks {
            for r in 0..block.rows {
                out.copy_row_from(i, block, r);
                i += 1;
            }
        }
        out
    }

    pub fn iter_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().copied()
    }
}
