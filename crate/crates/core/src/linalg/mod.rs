//! Complex dense and sparse kernels: storage, LU factorizations and solves,
//! orthonormalization and the dense eigensolver used for reduced problems.

mod dense;
mod eig;
mod lu;
mod qr;
mod sparse;
mod sparse_lu;

pub use dense::{dotc, norm2, ComplexDense, C64};
pub use eig::{dense_eig, eigenvalues, hessenberg, schur, standard_eig, EigDecomp};
pub use lu::{lu_factor, lu_solve, LUFactors, SolveMode, SINGULAR_PIVOT_RATIO};
pub use qr::{
    pivoted_orthonormalize, pivoted_orthonormalize_with, qr_orthonormalize, Orthonormalized,
    RANK_TOLERANCE,
};
pub use sparse::ComplexSparse;
pub use sparse_lu::{sparse_lu_factor, SparseLU};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("singular factorization (smallest relative pivot {min_rel_pivot:e})")]
    Singular { min_rel_pivot: f64 },
    #[error("QR iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid sparse structure: {0}")]
    InvalidSparse(&'static str),
    #[error("index ({row}, {col}) out of range")]
    IndexOutOfRange { row: usize, col: usize },
}

/// A dense or sparse LU factorization behind one solve interface.
#[derive(Debug, Clone)]
pub enum Factorization {
    Dense(LUFactors),
    Sparse(SparseLU),
}

impl Factorization {
    pub fn min_rel_pivot(&self) -> f64 {
        match self {
            Factorization::Dense(f) => f.min_rel_pivot(),
            Factorization::Sparse(f) => f.min_rel_pivot(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Factorization::Dense(f) => f.dim(),
            Factorization::Sparse(f) => f.dim(),
        }
    }

    pub fn solve(&self, rhs: &ComplexDense, mode: SolveMode) -> Result<ComplexDense, LinalgError> {
        match self {
            Factorization::Dense(f) => f.solve(rhs, mode),
            Factorization::Sparse(f) => f.solve(rhs, mode),
        }
    }
}
