use super::dense::{dotc, norm2, ComplexDense};

/// Columns whose residual norm falls below this fraction of the largest input
/// column norm are treated as linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Orthonormalized {
    /// `n × rank` with orthonormal columns.
    pub q: ComplexDense,
    pub rank: usize,
    /// Input column chosen at each step; the first `rank` entries span `span(Q)`.
    pub pivots: Vec<usize>,
}

/// Column-pivoted Gram-Schmidt with a full second orthogonalization pass.
pub fn qr_orthonormalize(u: &ComplexDense) -> (ComplexDense, usize) {
    let o = pivoted_orthonormalize(u);
    (o.q, o.rank)
}

pub fn pivoted_orthonormalize(u: &ComplexDense) -> Orthonormalized {
    pivoted_orthonormalize_with(u, RANK_TOLERANCE)
}

/// As [`pivoted_orthonormalize`] with a caller-chosen relative rank threshold.
pub fn pivoted_orthonormalize_with(u: &ComplexDense, rel_tol: f64) -> Orthonormalized {
    let (n, p) = (u.rows(), u.cols());
    let mut work = u.clone();
    let mut pivots: Vec<usize> = (0..p).collect();
    let largest = u.column_norms().into_iter().fold(0.0, f64::max);
    let tol = rel_tol * largest;
    let mut q = ComplexDense::zeros(n, p.min(n));
    let mut rank = 0;
    if largest == 0.0 {
        return Orthonormalized {
            q: ComplexDense::zeros(n, 0),
            rank: 0,
            pivots,
        };
    }
    while rank < p && rank < n {
        let (best, best_norm) =
            (rank..p)
                .map(|j| (j, norm2(work.col(j))))
                .fold(
                    (rank, -1.0),
                    |acc, (j, v)| if v > acc.1 { (j, v) } else { acc },
                );
        if best_norm <= tol {
            break;
        }
        if best != rank {
            let (a, b) = work.col_pair_mut(rank, best);
            a.swap_with_slice(b);
            pivots.swap(rank, best);
        }
        let mut v = work.col(rank).to_vec();
        for _ in 0..2 {
            for k in 0..rank {
                let qk = q.col(k);
                let s = dotc(qk, &v);
                for (vi, &qi) in v.iter_mut().zip(qk) {
                    *vi -= qi * s;
                }
            }
        }
        let nv = norm2(&v);
        if nv <= tol {
            break;
        }
        let inv = 1.0 / nv;
        let qcol = q.col_mut(rank);
        for (d, s) in qcol.iter_mut().zip(&v) {
            *d = s * inv;
        }
        let qk = q.col(rank).to_vec();
        for j in rank + 1..p {
            let col = work.col_mut(j);
            let s = dotc(&qk, col);
            for (ci, &qi) in col.iter_mut().zip(&qk) {
                *ci -= qi * s;
            }
        }
        rank += 1;
    }
    let keep: Vec<usize> = (0..rank).collect();
    Orthonormalized {
        q: q.select_columns(&keep),
        rank,
        pivots,
    }
}
