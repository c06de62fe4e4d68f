use super::dense::{ComplexDense, C64};
use super::LinalgError;

/// Factorizations with a smallest-to-largest pivot ratio below this are refused by the solver.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Solve `M x = b`.
    Direct,
    /// Solve `Mᴴ x = b` with the factors of `M`.
    ConjTranspose,
}

/// Partial-pivoted LU, `P·M = L·U`, with `L` unit lower triangular.
///
/// `perm[i]` is the row of `M` that ends up in row `i` of `P·M`.
#[derive(Debug, Clone)]
pub struct LUFactors {
    lu: ComplexDense,
    perm: Vec<usize>,
    min_rel_pivot: f64,
}

pub fn lu_factor(m: &ComplexDense) -> Result<LUFactors, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, pmax) = a.col(k)[k..]
            .iter()
            .enumerate()
            .fold((k, -1.0), |(bi, bv), (i, z)| {
                let v = z.norm();
                if v > bv {
                    (k + i, v)
                } else {
                    (bi, bv)
                }
            });
        if p != k {
            perm.swap(k, p);
            for j in 0..n {
                let col = a.col_mut(j);
                col.swap(k, p);
            }
        }
        if pmax == 0.0 {
            continue;
        }
        let pivot = a[(k, k)];
        let inv = C64::new(1.0, 0.0) / pivot;
        for z in &mut a.col_mut(k)[k + 1..] {
            *z *= inv;
        }
        for j in k + 1..n {
            let (lcol, ucol) = a.col_pair_mut(k, j);
            let ukj = ucol[k];
            if ukj == C64::new(0.0, 0.0) {
                continue;
            }
            for (u, l) in ucol[k + 1..].iter_mut().zip(&lcol[k + 1..]) {
                *u -= l * ukj;
            }
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let v = a[(i, i)].norm();
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
    Ok(LUFactors {
        lu: a,
        perm,
        min_rel_pivot,
    })
}

impl LUFactors {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Smallest pivot magnitude divided by the largest.
    pub fn min_rel_pivot(&self) -> f64 {
        self.min_rel_pivot
    }

    pub fn is_singular(&self) -> bool {
        self.min_rel_pivot < SINGULAR_PIVOT_RATIO
    }

    pub fn l(&self) -> ComplexDense {
        let n = self.dim();
        ComplexDense::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
            std::cmp::Ordering::Less => C64::new(0.0, 0.0),
        })
    }

    pub fn u(&self) -> ComplexDense {
        let n = self.dim();
        ComplexDense::from_fn(n, n, |i, j| {
            if i <= j {
                self.lu[(i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `log |det M|`.
    pub fn log_abs_det(&self) -> f64 {
        (0..self.dim()).map(|i| self.lu[(i, i)].norm().ln()).sum()
    }

    pub fn solve(&self, rhs: &ComplexDense, mode: SolveMode) -> Result<ComplexDense, LinalgError> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: (n, rhs.cols()),
                found: (rhs.rows(), rhs.cols()),
            });
        }
        if self.is_singular() {
            return Err(LinalgError::Singular {
                min_rel_pivot: self.min_rel_pivot,
            });
        }
        let mut out = ComplexDense::zeros(n, rhs.cols());
        for j in 0..rhs.cols() {
            self.solve_in_place(rhs.col(j), out.col_mut(j), mode);
        }
        Ok(out)
    }

    pub fn solve_vec(&self, b: &[C64], mode: SolveMode) -> Result<Vec<C64>, LinalgError> {
        let n = self.dim();
        let rhs = ComplexDense::from_col_major(n, 1, b.to_vec())?;
        Ok(self.solve(&rhs, mode)?.into_vec())
    }

    fn solve_in_place(&self, b: &[C64], x: &mut [C64], mode: SolveMode) {
        let n = self.dim();
        let lu = &self.lu;
        match mode {
            SolveMode::Direct => {
                for i in 0..n {
                    x[i] = b[self.perm[i]];
                }
                for k in 0..n {
                    let xk = x[k];
                    if xk == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (xi, l) in x[k + 1..].iter_mut().zip(&lu.col(k)[k + 1..]) {
                        *xi -= l * xk;
                    }
                }
                for k in (0..n).rev() {
                    let col = lu.col(k);
                    x[k] /= col[k];
                    let xk = x[k];
                    for (xi, u) in x[..k].iter_mut().zip(&col[..k]) {
                        *xi -= u * xk;
                    }
                }
            }
            SolveMode::ConjTranspose => {
                // Uᴴ z = b
                let mut w = b.to_vec();
                for k in 0..n {
                    let col = lu.col(k);
                    let s = col[..k]
                        .iter()
                        .zip(&w[..k])
                        .fold(C64::new(0.0, 0.0), |acc, (u, z)| acc + u.conj() * z);
                    w[k] = (w[k] - s) / col[k].conj();
                }
                // Lᴴ y = z
                for k in (0..n).rev() {
                    let col = lu.col(k);
                    let s = col[k + 1..]
                        .iter()
                        .zip(&w[k + 1..])
                        .fold(C64::new(0.0, 0.0), |acc, (l, z)| acc + l.conj() * z);
                    w[k] -= s;
                }
                for i in 0..n {
                    x[self.perm[i]] = w[i];
                }
            }
        }
    }
}

pub fn lu_solve(
    factors: &LUFactors,
    rhs: &ComplexDense,
    mode: SolveMode,
) -> Result<ComplexDense, LinalgError> {
    factors.solve(rhs, mode)
}
