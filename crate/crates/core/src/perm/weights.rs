use alloc::vec::Vec;

use crate::{Error, Result};

/// An `n × N` matrix (`n ≤ N`) with rows `a_{i,1} ≥ … ≥ a_{i,N} > 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "MatrixRepr", into = "MatrixRepr"))]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "weight matrix needs at least one row".into(),
            ));
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(n * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(n, cols, data)
    }

    /// Row-major constructor.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols < rows {
            return Err(Error::InvalidParameter(alloc::format!(
                "need 1 <= n <= N, got n = {rows}, N = {cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        for i in 0..rows {
            let row = &data[i * cols..(i + 1) * cols];
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositiveEntry { row: i, col: j });
                }
                if j > 0 && v > row[j - 1] {
                    return Err(Error::NotDecreasing { row: i, col: j });
                }
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Every entry equal to `value`.
    pub fn constant(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::from_flat(rows, cols, alloc::vec![value; rows * cols])
    }

    /// Number of rows `n`.
    pub fn n(&self) -> usize {
        self.rows
    }

    /// Number of columns `N`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// The same matrix with its rows reordered by `perm` (row `i` of the
    /// result is row `perm[i]` of `self`).
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for &p in perm {
            data.extend_from_slice(self.row(p));
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            })
        }
    }

    pub(crate) fn require_len(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.rows {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rows,
                got: x.len(),
            })
        }
    }
}

#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(dead_code)]
struct MatrixRepr {
    n: usize,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    big_n: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for WeightMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let m = Self::new(r.rows)?;
        if m.rows != r.n || m.cols != r.big_n {
            return Err(Error::DimensionMismatch {
                expected: r.n * r.big_n,
                got: m.rows * m.cols,
            });
        }
        Ok(m)
    }
}

impl From<WeightMatrix> for MatrixRepr {
    fn from(m: WeightMatrix) -> Self {
        Self {
            n: m.rows,
            big_n: m.cols,
            rows: m.to_rows(),
        }
    }
}

/// An `n × n × n` array of arbitrary reals `a(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    n: usize,
    data: Vec<f64>,
}

impl Cube {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cube needs n >= 1".into()));
        }
        if data.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }
}
