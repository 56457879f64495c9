use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_size, checked_dims, DenseMatrix};
use crate::error::{Error, Result};

/// Canonical basis vector `δ_dim^index`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaVector {
    dim: usize,
    index: usize,
}

impl DeltaVector {
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if index == 0 || index > dim {
            return Err(Error::DeltaIndex { index, dim });
        }
        Ok(Self { dim, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// `self ⋉ other`, which for basis vectors is their Kronecker product.
    pub fn join(&self, other: &DeltaVector) -> Result<DeltaVector> {
        let dim = checked_dims(self.dim, other.dim)?;
        Ok(DeltaVector {
            dim,
            index: (self.index - 1) * other.dim + other.index,
        })
    }

    /// Inverse of [`join`](Self::join): splits off a trailing factor of `dim` `tail_dim`.
    pub fn split(&self, tail_dim: usize) -> Result<(DeltaVector, DeltaVector)> {
        if tail_dim == 0 || !self.dim.is_multiple_of(tail_dim) {
            return Err(Error::dim(format!(
                "cannot split δ_{} into a factor of dimension {tail_dim}",
                self.dim
            )));
        }
        let i = self.index - 1;
        Ok((
            DeltaVector {
                dim: self.dim / tail_dim,
                index: i / tail_dim + 1,
            },
            DeltaVector {
                dim: tail_dim,
                index: i % tail_dim + 1,
            },
        ))
    }

    pub fn to_logical(&self) -> LogicalMatrix {
        LogicalMatrix {
            rows: self.dim,
            cols: vec![self.index],
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_logical().to_dense()
    }
}

impl fmt::Display for DeltaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}^{}", self.dim, self.index)
    }
}

/// Matrix whose every column is a canonical basis vector, stored as the
/// 1-based row index of the single 1 in each column (`δ_rows[i1 i2 ...]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLogical")]
pub struct LogicalMatrix {
    rows: usize,
    cols: Vec<usize>,
}

#[derive(Deserialize)]
struct RawLogical {
    rows: usize,
    cols: Vec<usize>,
}

impl TryFrom<RawLogical> for LogicalMatrix {
    type Error = Error;

    fn try_from(raw: RawLogical) -> Result<Self> {
        LogicalMatrix::new(raw.rows, raw.cols)
    }
}

impl LogicalMatrix {
    pub fn new(rows: usize, cols: Vec<usize>) -> Result<Self> {
        if rows == 0 || cols.is_empty() {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {rows}x{}",
                cols.len()
            )));
        }
        if let Some(&bad) = cols.iter().find(|&&c| c == 0 || c > rows) {
            return Err(Error::DeltaIndex {
                index: bad,
                dim: rows,
            });
        }
        check_size(rows, cols.len(), Some(cols.len()))?;
        Ok(Self { rows, cols })
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::new(k, (1..=k).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols.len())
    }

    /// Column indices, 1-based.
    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    /// Row index of the 1 in column `j` (both 1-based).
    pub fn column(&self, j: usize) -> usize {
        self.cols[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols.len() && self.cols.iter().enumerate().all(|(i, &c)| c == i + 1)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.cols.len();
        let mut data = vec![0i64; checked_dims(self.rows, n)?];
        for (j, &r) in self.cols.iter().enumerate() {
            data[(r - 1) * n + j] = 1;
        }
        DenseMatrix::new(self.rows, n, data)
    }

    /// Semi-tensor product computed directly on column indices.
    pub fn stp(&self, other: &LogicalMatrix) -> Result<LogicalMatrix> {
        let n = self.cols.len();
        let p = other.rows;
        let t = n.lcm(&p);
        let a = t / n;
        let b = t / p;
        let rows = checked_dims(self.rows, a)?;
        let ncols = checked_dims(other.cols.len(), b)?;
        check_size(rows, ncols, Some(ncols))?;
        let mut cols = Vec::with_capacity(ncols);
        for &bk in &other.cols {
            for s in 0..b {
                let mid = (bk - 1) * b + s;
                let (j, r) = (mid / a, mid % a);
                cols.push((self.cols[j] - 1) * a + r + 1);
            }
        }
        Ok(LogicalMatrix { rows, cols })
    }

    pub fn kron(&self, other: &LogicalMatrix) -> Result<LogicalMatrix> {
        let rows = checked_dims(self.rows, other.rows)?;
        let ncols = checked_dims(self.cols.len(), other.cols.len())?;
        check_size(rows, ncols, Some(ncols))?;
        let mut cols = Vec::with_capacity(ncols);
        for &a in &self.cols {
            for &b in &other.cols {
                cols.push((a - 1) * other.rows + b);
            }
        }
        Ok(LogicalMatrix { rows, cols })
    }

    /// `self ⋉ v` for a basis vector; the result is a logical matrix because
    /// `v` may be shorter than the column count.
    pub fn apply(&self, v: &DeltaVector) -> Result<LogicalMatrix> {
        self.stp(&v.to_logical())
    }

    /// `self ⋉ v` when it is a single column, i.e. `v.dim() == ncols`.
    pub fn apply_vector(&self, v: &DeltaVector) -> Result<DeltaVector> {
        if v.dim() != self.cols.len() {
            return Err(Error::dim(format!(
                "{}x{} matrix applied to δ_{}",
                self.rows,
                self.cols.len(),
                v.dim()
            )));
        }
        DeltaVector::new(self.rows, self.cols[v.index() - 1])
    }

    /// Ordinary power of a square logical matrix; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Result<LogicalMatrix> {
        if self.rows != self.cols.len() {
            return Err(Error::dim(format!(
                "power of non-square {}x{} matrix",
                self.rows,
                self.cols.len()
            )));
        }
        let mut acc = Self::identity(self.rows)?;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.stp(&base)?;
            }
            base = base.stp(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Distinct column indices in ascending order.
    pub fn distinct_columns(&self) -> Vec<usize> {
        let mut v = self.cols.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for LogicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ_{}[", self.rows)?;
        for (i, c) in self.cols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for LogicalMatrix {
    type Err = Error;

    /// Parses the shorthand `δ_4[1 2 3]` (an ASCII `d_4[...]` is also accepted).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMatrix(format!("not a logical-matrix shorthand: {s:?}"));
        let s = s.trim();
        let rest = s
            .strip_prefix("δ_")
            .or_else(|| s.strip_prefix("d_"))
            .ok_or_else(bad)?;
        let (rows, body) = rest.split_once('[').ok_or_else(bad)?;
        let body = body.strip_suffix(']').ok_or_else(bad)?;
        let rows: usize = rows.trim().parse().map_err(|_| bad())?;
        let cols = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        LogicalMatrix::new(rows, cols)
    }
}
