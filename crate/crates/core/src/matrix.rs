use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-major dense matrix of 64-bit reals, as read from an array file.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::Overflow(vec![rows, cols]))?;
        if data.len() != expected {
            return Err(Error::Shape {
                what: "matrix element count",
                expected,
                found: data.len(),
            });
        }
        check_finite(&data, cols)?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }
}

fn check_finite(data: &[f64], cols: usize) -> Result<()> {
    match data.iter().position(|x| !x.is_finite()) {
        None => Ok(()),
        Some(p) => {
            let cols = cols.max(1);
            Err(Error::NonFinite {
                row: p / cols,
                col: p % cols,
            })
        }
    }
}

/// Spatial layout `height x width` of a token sequence. Always supplied by
/// the caller, never inferred from the token count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub height: usize,
    pub width: usize,
}

impl Grid {
    pub fn new(height: usize, width: usize) -> Self {
        Grid { height, width }
    }

    pub fn cells(&self) -> usize {
        self.height * self.width
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.height, self.width)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `HxW`, e.g. `24x24`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid {s:?} is not of the form HxW"));
        let (h, w) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let height: usize = h.trim().parse().map_err(|_| bad())?;
        let width: usize = w.trim().parse().map_err(|_| bad())?;
        if height == 0 || width == 0 {
            return Err(bad());
        }
        Ok(Grid { height, width })
    }
}

/// `T x d` visual token embeddings, one token per row.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenMatrix {
    inner: Matrix,
    grid: Option<Grid>,
}

impl TokenMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::try_from(Matrix::new(rows, cols, data)?)
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape {
                    what: "row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        if grid.cells() != self.tokens() {
            return Err(Error::Shape {
                what: "grid cells (H*W) vs token count",
                expected: self.tokens(),
                found: grid.cells(),
            });
        }
        self.grid = Some(grid);
        Ok(self)
    }

    /// Token count `T`.
    pub fn tokens(&self) -> usize {
        self.inner.rows
    }

    /// Embedding dimension `d`.
    pub fn dim(&self) -> usize {
        self.inner.cols
    }

    pub fn grid(&self) -> Option<Grid> {
        self.grid
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.inner.data.chunks_exact(self.inner.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.inner.data
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }
}

impl TryFrom<Matrix> for TokenMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        if m.rows == 0 {
            return Err(Error::Empty("token matrix needs at least one row"));
        }
        if m.cols == 0 {
            return Err(Error::Empty("token matrix needs at least one column"));
        }
        Ok(TokenMatrix { inner: m, grid: None })
    }
}

/// `L x d` text token embeddings. `L = 0` is a valid, text-absent state.
#[derive(Debug, Clone, PartialEq)]
pub struct TextMatrix {
    inner: Matrix,
    keep_mask: Option<Vec<bool>>,
}

impl TextMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Ok(Self::from(Matrix::new(rows, cols, data)?))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape {
                    what: "row length",
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// No text at all.
    pub fn empty(cols: usize) -> Self {
        TextMatrix {
            inner: Matrix {
                rows: 0,
                cols,
                data: Vec::new(),
            },
            keep_mask: None,
        }
    }

    pub fn with_keep_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.len() {
            return Err(Error::Shape {
                what: "keep mask length vs text rows",
                expected: self.len(),
                found: mask.len(),
            });
        }
        self.keep_mask = Some(mask);
        Ok(self)
    }

    /// Row count `L`, before masking.
    pub fn len(&self) -> usize {
        self.inner.rows
    }

    pub fn is_empty(&self) -> bool {
        self.inner.rows == 0
    }

    pub fn dim(&self) -> usize {
        self.inner.cols
    }

    pub fn keep_mask(&self) -> Option<&[bool]> {
        self.keep_mask.as_deref()
    }

    pub fn row(&self, j: usize) -> &[f64] {
        self.inner.row(j)
    }

    /// Rows surviving the keep mask, in order.
    pub fn kept_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len())
            .filter(|&j| self.keep_mask.as_ref().is_none_or(|m| m[j]))
            .map(|j| self.inner.row(j))
    }

    /// True when no row survives the keep mask.
    pub fn is_effectively_empty(&self) -> bool {
        self.kept_rows().next().is_none()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }
}

impl From<Matrix> for TextMatrix {
    fn from(m: Matrix) -> Self {
        TextMatrix {
            inner: m,
            keep_mask: None,
        }
    }
}

/// One external score per token, e.g. CLS attention from a vision encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    data: Vec<f64>,
}

impl ScoreVector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if let Some(p) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: p, col: 0 });
        }
        Ok(ScoreVector { data })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
