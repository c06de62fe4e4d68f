//! Left-looking sparse LU with threshold-free partial pivoting.
//!
//! Column `k` of the factors is obtained from a sparse triangular solve
//! `L \ M(:, k)` whose nonzero pattern comes from a depth-first reach over the
//! graph of `L`. No fill-reducing column ordering is applied, so this is meant
//! for banded or otherwise low-fill matrices.

use super::dense::{ComplexDense, C64};
use super::lu::{SolveMode, SINGULAR_PIVOT_RATIO};
use super::sparse::ComplexSparse;
use super::LinalgError;

const NONE: usize = usize::MAX;

/// `P·M = L·U` in compressed-column form. Rows of `L` are stored in pivot order,
/// each `L` column starts with its unit diagonal and each `U` column ends with its pivot.
#[derive(Debug, Clone)]
pub struct SparseLU {
    n: usize,
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<C64>,
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<C64>,
    /// `pinv[i]` = position of row `i` of `M` in `P·M`.
    pinv: Vec<usize>,
    min_rel_pivot: f64,
}

pub fn sparse_lu_factor(m: &ComplexSparse) -> Result<SparseLU, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    // Rows of the transpose are columns of `m`.
    let csc = m.transpose();
    let (b_ptr, b_idx, b_val) = (csc.row_ptr(), csc.col_idx(), csc.values());

    let mut l_ptr = vec![0usize; n + 1];
    let mut l_idx: Vec<usize> = Vec::with_capacity(m.nnz() * 2);
    let mut l_val: Vec<C64> = Vec::with_capacity(m.nnz() * 2);
    let mut u_ptr = vec![0usize; n + 1];
    let mut u_idx: Vec<usize> = Vec::with_capacity(m.nnz() * 2);
    let mut u_val: Vec<C64> = Vec::with_capacity(m.nnz() * 2);

    let mut pinv = vec![NONE; n];
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut xi = vec![0usize; n];
    let mut pstack = vec![0usize; n];
    let mut marked = vec![false; n];
    let mut next_free_row = 0usize;

    for k in 0..n {
        l_ptr[k] = l_idx.len();
        u_ptr[k] = u_idx.len();

        // Reach of column k in the graph of L.
        let mut top = n;
        for &start in &b_idx[b_ptr[k]..b_ptr[k + 1]] {
            if marked[start] {
                continue;
            }
            let mut head = 0usize;
            xi[0] = start;
            loop {
                let j = xi[head];
                let col = pinv[j];
                if !marked[j] {
                    marked[j] = true;
                    pstack[head] = if col == NONE { 0 } else { l_ptr[col] };
                }
                let end = if col == NONE { 0 } else { l_ptr[col + 1] };
                let mut descended = false;
                let mut p = pstack[head];
                while p < end {
                    let i = l_idx[p];
                    p += 1;
                    if marked[i] {
                        continue;
                    }
                    pstack[head] = p;
                    head += 1;
                    xi[head] = i;
                    descended = true;
                    break;
                }
                if !descended {
                    top -= 1;
                    xi[top] = j;
                    if head == 0 {
                        break;
                    }
                    head -= 1;
                }
            }
        }
        for &i in &xi[top..n] {
            marked[i] = false;
        }

        // Numeric triangular solve in topological order.
        for &i in &xi[top..n] {
            x[i] = C64::new(0.0, 0.0);
        }
        for p in b_ptr[k]..b_ptr[k + 1] {
            x[b_idx[p]] = b_val[p];
        }
        for &j in &xi[top..n] {
            let col = pinv[j];
            if col == NONE {
                continue;
            }
            let xj = x[j];
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in l_ptr[col] + 1..l_ptr[col + 1] {
                x[l_idx[p]] -= l_val[p] * xj;
            }
        }

        // Partial pivoting over rows not yet chosen.
        let mut ipiv = NONE;
        let mut best = -1.0;
        for &i in &xi[top..n] {
            if pinv[i] == NONE {
                let t = x[i].norm();
                if t > best {
                    best = t;
                    ipiv = i;
                }
            } else {
                u_idx.push(pinv[i]);
                u_val.push(x[i]);
            }
        }
        if ipiv == NONE {
            // Structurally empty candidate set: take any free row, zero pivot.
            while pinv[next_free_row] != NONE {
                next_free_row += 1;
            }
            ipiv = next_free_row;
            x[ipiv] = C64::new(0.0, 0.0);
        }
        let pivot = x[ipiv];
        u_idx.push(k);
        u_val.push(pivot);
        pinv[ipiv] = k;
        l_idx.push(ipiv);
        l_val.push(C64::new(1.0, 0.0));
        let inv = if pivot == C64::new(0.0, 0.0) {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0) / pivot
        };
        for &i in &xi[top..n] {
            if pinv[i] == NONE && x[i] != C64::new(0.0, 0.0) {
                l_idx.push(i);
                l_val.push(x[i] * inv);
            }
            x[i] = C64::new(0.0, 0.0);
        }
        x[ipiv] = C64::new(0.0, 0.0);
    }
    l_ptr[n] = l_idx.len();
    u_ptr[n] = u_idx.len();
    for i in l_idx.iter_mut() {
        *i = pinv[*i];
    }

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..n {
        let v = u_val[u_ptr[k + 1] - 1].norm();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let min_rel_pivot = if n == 0 {
        1.0
    } else if hi == 0.0 {
        0.0
    } else {
        lo / hi
    };
    Ok(SparseLU {
        n,
        l_ptr,
        l_idx,
        l_val,
        u_ptr,
        u_idx,
        u_val,
        pinv,
        min_rel_pivot,
    })
}

impl SparseLU {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn min_rel_pivot(&self) -> f64 {
        self.min_rel_pivot
    }

    pub fn is_singular(&self) -> bool {
        self.min_rel_pivot < SINGULAR_PIVOT_RATIO
    }

    /// Stored nonzeros in `L` and `U` together.
    pub fn factor_nnz(&self) -> usize {
        self.l_idx.len() + self.u_idx.len()
    }

    /// Row permutation as `perm[i]` = row of `M` placed at row `i` of `P·M`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.n];
        for (i, &p) in self.pinv.iter().enumerate() {
            perm[p] = i;
        }
        perm
    }

    pub fn l(&self) -> ComplexDense {
        let mut l = ComplexDense::zeros(self.n, self.n);
        for j in 0..self.n {
            for p in self.l_ptr[j]..self.l_ptr[j + 1] {
                l[(self.l_idx[p], j)] = self.l_val[p];
            }
        }
        l
    }

    pub fn u(&self) -> ComplexDense {
        let mut u = ComplexDense::zeros(self.n, self.n);
        for j in 0..self.n {
            for p in self.u_ptr[j]..self.u_ptr[j + 1] {
                u[(self.u_idx[p], j)] = self.u_val[p];
            }
        }
        u
    }

    pub fn solve(&self, rhs: &ComplexDense, mode: SolveMode) -> Result<ComplexDense, LinalgError> {
        if rhs.rows() != self.n {
            return Err(LinalgError::DimensionMismatch {
                expected: (self.n, rhs.cols()),
                found: (rhs.rows(), rhs.cols()),
            });
        }
        if self.is_singular() {
            return Err(LinalgError::Singular {
                min_rel_pivot: self.min_rel_pivot,
            });
        }
        let mut out = ComplexDense::zeros(self.n, rhs.cols());
        let mut w = vec![C64::new(0.0, 0.0); self.n];
        for j in 0..rhs.cols() {
            match mode {
                SolveMode::Direct => self.solve_direct(rhs.col(j), &mut w),
                SolveMode::ConjTranspose => self.solve_adjoint(rhs.col(j), &mut w),
            }
            out.col_mut(j).copy_from_slice(&w);
        }
        Ok(out)
    }

    fn solve_direct(&self, b: &[C64], x: &mut [C64]) {
        for (i, &bi) in b.iter().enumerate() {
            x[self.pinv[i]] = bi;
        }
        for j in 0..self.n {
            let xj = x[j];
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                x[self.l_idx[p]] -= self.l_val[p] * xj;
            }
        }
        for j in (0..self.n).rev() {
            let last = self.u_ptr[j + 1] - 1;
            x[j] /= self.u_val[last];
            let xj = x[j];
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.u_ptr[j]..last {
                x[self.u_idx[p]] -= self.u_val[p] * xj;
            }
        }
    }

    fn solve_adjoint(&self, b: &[C64], x: &mut [C64]) {
        let mut w = b.to_vec();
        for j in 0..self.n {
            let last = self.u_ptr[j + 1] - 1;
            let mut s = w[j];
            for p in self.u_ptr[j]..last {
                s -= self.u_val[p].conj() * w[self.u_idx[p]];
            }
            w[j] = s / self.u_val[last].conj();
        }
        for j in (0..self.n).rev() {
            let mut s = w[j];
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                s -= self.l_val[p].conj() * w[self.l_idx[p]];
            }
            w[j] = s;
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = w[self.pinv[i]];
        }
    }
}
