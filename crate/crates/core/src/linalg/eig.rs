//! Dense nonsymmetric eigensolver for the small reduced problems.
//!
//! The pencil `(Â, B̂)` is brought to standard form `B̂⁻¹Â`, reduced to upper
//! Hessenberg form with Householder reflectors and then to complex Schur form
//! by single-shift QR sweeps. Eigenvectors come from back substitution on the
//! triangular factor.

use super::dense::{norm2, ComplexDense, C64};
use super::lu::{lu_factor, SolveMode};
use super::LinalgError;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub eigenvalues: Vec<C64>,
    /// Right eigenvectors `W`, unit Euclidean column norms.
    pub right: ComplexDense,
    /// Left eigenvectors `Z` with `Zᴴ B̂ W = I`.
    pub left: Option<ComplexDense>,
    /// `max |(Zᴴ B̂ W − I)_ij|` when left vectors were requested.
    pub biorth_defect: Option<f64>,
}

pub fn dense_eig(
    a: &ComplexDense,
    b: &ComplexDense,
    want_left: bool,
) -> Result<EigDecomp, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.rows() != a.rows() || b.cols() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            expected: (a.rows(), a.cols()),
            found: (b.rows(), b.cols()),
        });
    }
    let fb = lu_factor(b)?;
    let m = fb.solve(a, SolveMode::Direct)?;
    let (eigenvalues, right) = standard_eig(&m)?;
    if !want_left {
        return Ok(EigDecomp {
            eigenvalues,
            right,
            left: None,
            biorth_defect: None,
        });
    }
    let bw = b.matmul(&right)?;
    let fbw = lu_factor(&bw)?;
    let n = a.rows();
    let left = fbw.solve(&ComplexDense::identity(n), SolveMode::ConjTranspose)?;
    let defect = left
        .adjoint_matmul(&bw)?
        .sub(&ComplexDense::identity(n))?
        .norm_max();
    Ok(EigDecomp {
        eigenvalues,
        right,
        left: Some(left),
        biorth_defect: Some(defect),
    })
}

/// Eigenvalues and unit-norm right eigenvectors of a square matrix.
pub fn standard_eig(m: &ComplexDense) -> Result<(Vec<C64>, ComplexDense), LinalgError> {
    let (t, z) = schur(m)?;
    let v = triangular_eigenvectors(&t);
    let mut w = z.matmul(&v)?;
    for j in 0..w.cols() {
        let nrm = norm2(w.col(j));
        if nrm > 0.0 {
            let inv = 1.0 / nrm;
            for x in w.col_mut(j) {
                *x *= inv;
            }
        }
    }
    Ok((t.diagonal(), w))
}

pub fn eigenvalues(m: &ComplexDense) -> Result<Vec<C64>, LinalgError> {
    Ok(schur(m)?.0.diagonal())
}

/// Complex Schur form `M = Z T Zᴴ`.
pub fn schur(m: &ComplexDense) -> Result<(ComplexDense, ComplexDense), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let (mut h, mut z) = hessenberg(m);
    hessenberg_qr(&mut h, &mut z)?;
    Ok((h, z))
}

/// Householder reduction to upper Hessenberg form, `M = Q H Qᴴ`.
pub fn hessenberg(m: &ComplexDense) -> (ComplexDense, ComplexDense) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexDense::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut s = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let x = &h.col(k)[k + 1..];
        let alpha_norm = norm2(x);
        if alpha_norm == 0.0 || x[1..].iter().all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * alpha_norm;
        let len = n - k - 1;
        v[..len].copy_from_slice(x);
        v[0] -= alpha;
        let vn = norm2(&v[..len]);
        for vi in &mut v[..len] {
            *vi /= vn;
        }
        let v = &v[..len];
        // Left application on rows k+1.., columns k..
        for j in k..n {
            let col = &mut h.col_mut(j)[k + 1..];
            let d = v
                .iter()
                .zip(col.iter())
                .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
            let d2 = d * 2.0;
            for (c, &vi) in col.iter_mut().zip(v) {
                *c -= vi * d2;
            }
        }
        // Right application on columns k+1.., all rows; same for Q.
        for target in [&mut h, &mut q] {
            for si in s.iter_mut() {
                *si = C64::new(0.0, 0.0);
            }
            for (l, &vl) in v.iter().enumerate() {
                for (si, &c) in s.iter_mut().zip(target.col(k + 1 + l)) {
                    *si += c * vl;
                }
            }
            for (l, &vl) in v.iter().enumerate() {
                let f = vl.conj() * 2.0;
                for (c, &si) in target.col_mut(k + 1 + l).iter_mut().zip(&s) {
                    *c -= si * f;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Givens rotation `[c s; -s̄ c]` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens(x: C64, y: C64) -> (f64, C64) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn hessenberg_qr(h: &mut ComplexDense, z: &mut ComplexDense) -> Result<(), LinalgError> {
    let n = h.rows();
    if n <= 1 {
        return Ok(());
    }
    let max_iter = 30 * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut ihi = n - 1;
    let hnorm = h.norm_fro().max(f64::MIN_POSITIVE);
    while ihi > 0 {
        // Look for a negligible subdiagonal entry.
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= EPS * diag || sub < f64::MIN_POSITIVE * 1e4 {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > max_iter {
            return Err(LinalgError::NoConvergence { sweeps: total });
        }
        let shift = if its.is_multiple_of(10) {
            h[(ihi, ihi)] + 0.75 * h[(ihi, ihi - 1)].re.abs()
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };
        // Implicit single-shift sweep over the active block l..=ihi.
        let mut x = h[(l, l)] - shift;
        let mut y = h[(l + 1, l)];
        for k in l..ihi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let start = if k > l { k - 1 } else { l };
            for j in start..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            let stop = (k + 2).min(ihi) + 1;
            rotate_columns(h, k, c, s, stop);
            rotate_columns(z, k, c, s, n);
            if k > l {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
    }
    // Clear anything below the diagonal left by rounding.
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(())
}

/// Right-multiplies columns `k, k+1` (first `rows` rows) by the adjoint rotation.
#[inline]
fn rotate_columns(m: &mut ComplexDense, k: usize, c: f64, s: C64, rows: usize) {
    let (ck, ck1) = m.col_pair_mut(k, k + 1);
    for (x, y) in ck[..rows].iter_mut().zip(ck1[..rows].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c + b * s.conj();
        *y = -a * s + b * c;
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = tr_half + root;
    let l2 = tr_half - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Right eigenvectors of an upper-triangular matrix, as columns of an upper-triangular matrix.
fn triangular_eigenvectors(t: &ComplexDense) -> ComplexDense {
    let n = t.rows();
    let mut v = ComplexDense::zeros(n, n);
    let tnorm = t.norm_max();
    let small = (EPS * tnorm).max(f64::MIN_POSITIVE * 1e10);
    for k in 0..n {
        let lambda = t[(k, k)];
        let col = v.col_mut(k);
        col[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for l in j + 1..=k {
                s += t[(j, l)] * col[l];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            col[j] = -s / d;
            let big = col[j].norm();
            if big > 1e100 {
                let inv = 1.0 / big;
                for x in col[..=k].iter_mut() {
                    *x *= inv;
                }
            }
        }
    }
    v
}
