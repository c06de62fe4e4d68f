use super::dense::{ComplexDense, C64};
use super::LinalgError;

/// Compressed sparse row storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSparse {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl ComplexSparse {
    pub fn new(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<C64>,
    ) -> Result<Self, LinalgError> {
        if row_ptr.len() != rows + 1 || row_ptr[0] != 0 {
            return Err(LinalgError::InvalidSparse("row pointer length or origin"));
        }
        if row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(LinalgError::InvalidSparse("row pointer not monotone"));
        }
        let nnz = row_ptr[rows];
        if col_idx.len() != nnz || values.len() != nnz {
            return Err(LinalgError::InvalidSparse("index/value length mismatch"));
        }
        for r in 0..rows {
            let idx = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&c| c >= cols) {
                return Err(LinalgError::InvalidSparse(
                    "column indices unsorted or out of range",
                ));
            }
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, C64)],
    ) -> Result<Self, LinalgError> {
        let mut sorted: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange { row: r, col: c });
            }
            sorted.push((r, c, v));
        }
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<C64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self::new(rows, cols, row_ptr, col_idx, values)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn from_dense(m: &ComplexDense) -> Self {
        let mut trip = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &trip).expect("dense entries are in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn to_dense(&self) -> ComplexDense {
        let mut m = ComplexDense::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let trip: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, &trip).expect("transpose stays in range")
    }

    pub fn adjoint(&self) -> Self {
        let trip: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.cols, self.rows, &trip).expect("adjoint stays in range")
    }

    pub fn norm_max(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.cols, 1),
                found: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1]).fold(C64::new(0.0, 0.0), |acc, k| {
                    acc + self.values[k] * x[self.col_idx[k]]
                })
            })
            .collect())
    }

    /// `selfᴴ · x`
    pub fn adjoint_matvec(&self, x: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, 1),
                found: (x.len(), 1),
            });
        }
        let mut y = vec![C64::new(0.0, 0.0); self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[k]] += self.values[k].conj() * xr;
            }
        }
        Ok(y)
    }

    /// Sparse times dense block.
    pub fn matmul_dense(&self, x: &ComplexDense) -> Result<ComplexDense, LinalgError> {
        if x.rows() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.cols, x.cols()),
                found: (x.rows(), x.cols()),
            });
        }
        let mut out = ComplexDense::zeros(self.rows, x.cols());
        for j in 0..x.cols() {
            let y = self.matvec(x.col(j))?;
            out.col_mut(j).copy_from_slice(&y);
        }
        Ok(out)
    }

    /// `selfᴴ` times dense block.
    pub fn adjoint_matmul_dense(&self, x: &ComplexDense) -> Result<ComplexDense, LinalgError> {
        if x.rows() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, x.cols()),
                found: (x.rows(), x.cols()),
            });
        }
        let mut out = ComplexDense::zeros(self.cols, x.cols());
        for j in 0..x.cols() {
            let y = self.adjoint_matvec(x.col(j))?;
            out.col_mut(j).copy_from_slice(&y);
        }
        Ok(out)
    }

    /// `alpha * self + beta * other` with merged sparsity.
    pub fn linear_combination(
        &self,
        alpha: C64,
        other: &Self,
        beta: C64,
    ) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.rows {
            let (mut a, ae) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let (mut b, be) = (other.row_ptr[r], other.row_ptr[r + 1]);
            while a < ae || b < be {
                let ca = if a < ae { self.col_idx[a] } else { usize::MAX };
                let cb = if b < be { other.col_idx[b] } else { usize::MAX };
                if ca == cb {
                    col_idx.push(ca);
                    values.push(alpha * self.values[a] + beta * other.values[b]);
                    a += 1;
                    b += 1;
                } else if ca < cb {
                    col_idx.push(ca);
                    values.push(alpha * self.values[a]);
                    a += 1;
                } else {
                    col_idx.push(cb);
                    values.push(beta * other.values[b]);
                    b += 1;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            row_ptr,
            col_idx,
            values,
        })
    }
}
