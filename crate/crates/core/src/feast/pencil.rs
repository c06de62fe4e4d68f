use crate::linalg::{
    lu_factor, norm2, sparse_lu_factor, ComplexDense, ComplexSparse, Factorization, LinalgError,
    C64,
};

/// Sparse shifted matrices at or below this size are factored densely.
pub const DENSE_CUTOFF: usize = 256;

/// How `z·B − A` is factored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorStrategy {
    /// Dense for dense operands, small sizes, or fill above 5%; sparse otherwise.
    #[default]
    Auto,
    Dense,
    Sparse,
}

/// One side of a pencil.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(ComplexDense),
    Sparse(ComplexSparse),
    Identity(usize),
}

impl Operator {
    pub fn dim(&self) -> (usize, usize) {
        match self {
            Operator::Dense(m) => (m.rows(), m.cols()),
            Operator::Sparse(m) => (m.rows(), m.cols()),
            Operator::Identity(n) => (*n, *n),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Operator::Dense(m) => m.is_real(),
            Operator::Sparse(m) => m.is_real(),
            Operator::Identity(_) => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Operator::Dense(m) => m.is_finite(),
            Operator::Sparse(m) => m.values().iter().all(|z| z.is_finite()),
            Operator::Identity(_) => true,
        }
    }

    pub fn norm_max(&self) -> f64 {
        match self {
            Operator::Dense(m) => m.norm_max(),
            Operator::Sparse(m) => m.norm_max(),
            Operator::Identity(n) => {
                if *n > 0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        match self {
            Operator::Dense(m) => m.rows() * m.cols(),
            Operator::Sparse(m) => m.nnz(),
            Operator::Identity(n) => *n,
        }
    }

    pub fn apply(&self, x: &ComplexDense) -> Result<ComplexDense, LinalgError> {
        match self {
            Operator::Dense(m) => m.matmul(x),
            Operator::Sparse(m) => m.matmul_dense(x),
            Operator::Identity(n) => {
                check_rows(*n, x)?;
                Ok(x.clone())
            }
        }
    }

    pub fn apply_adjoint(&self, x: &ComplexDense) -> Result<ComplexDense, LinalgError> {
        match self {
            Operator::Dense(m) => m.adjoint_matmul(x),
            Operator::Sparse(m) => m.adjoint_matmul_dense(x),
            Operator::Identity(n) => {
                check_rows(*n, x)?;
                Ok(x.clone())
            }
        }
    }

    pub fn to_dense(&self) -> ComplexDense {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Sparse(m) => m.to_dense(),
            Operator::Identity(n) => ComplexDense::identity(*n),
        }
    }

    pub fn to_sparse(&self) -> ComplexSparse {
        match self {
            Operator::Dense(m) => ComplexSparse::from_dense(m),
            Operator::Sparse(m) => m.clone(),
            Operator::Identity(n) => ComplexSparse::identity(*n),
        }
    }
}

fn check_rows(n: usize, x: &ComplexDense) -> Result<(), LinalgError> {
    if x.rows() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: (n, x.cols()),
            found: (x.rows(), x.cols()),
        });
    }
    Ok(())
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PencilError {
    #[error("A is {a:?} and B is {b:?}; both must be square of the same size")]
    Shape {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error("A is the zero matrix")]
    ZeroA,
    #[error("pencil has non-finite entries")]
    NonFinite,
}

/// The pair `(A, B)` of `A x = λ B x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    a: Operator,
    b: Operator,
}

impl Pencil {
    pub fn new(a: Operator, b: Operator) -> Result<Self, PencilError> {
        let (da, db) = (a.dim(), b.dim());
        if da.0 != da.1 || da != db {
            return Err(PencilError::Shape { a: da, b: db });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(PencilError::NonFinite);
        }
        if a.norm_max() == 0.0 {
            return Err(PencilError::ZeroA);
        }
        Ok(Pencil { a, b })
    }

    /// Standard problem `A x = λ x`.
    pub fn standard(a: Operator) -> Result<Self, PencilError> {
        let n = a.dim().0;
        Self::new(a, Operator::Identity(n))
    }

    pub fn dense(a: ComplexDense, b: ComplexDense) -> Result<Self, PencilError> {
        Self::new(Operator::Dense(a), Operator::Dense(b))
    }

    pub fn n(&self) -> usize {
        self.a.dim().0
    }

    pub fn a(&self) -> &Operator {
        &self.a
    }

    pub fn b(&self) -> &Operator {
        &self.b
    }

    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }

    fn use_dense(&self, strategy: FactorStrategy) -> bool {
        match strategy {
            FactorStrategy::Dense => true,
            FactorStrategy::Sparse => false,
            FactorStrategy::Auto => {
                let n = self.n();
                let sparse_side =
                    matches!(self.a, Operator::Sparse(_)) || matches!(self.b, Operator::Sparse(_));
                let dense_side =
                    matches!(self.a, Operator::Dense(_)) || matches!(self.b, Operator::Dense(_));
                let nnz = self.a.nnz() + self.b.nnz();
                dense_side || !sparse_side || n <= DENSE_CUTOFF || nnz.saturating_mul(20) > n * n
            }
        }
    }

    /// `z·B − A` in dense storage.
    pub fn shifted_dense(&self, z: C64) -> ComplexDense {
        let mut m = self.a.to_dense().scale(C64::new(-1.0, 0.0));
        match &self.b {
            Operator::Identity(n) => {
                for i in 0..*n {
                    m[(i, i)] += z;
                }
            }
            Operator::Dense(b) => m.axpy(z, b).expect("pencil shapes checked at construction"),
            Operator::Sparse(b) => {
                for (i, j, v) in b.triplets() {
                    m[(i, j)] += z * v;
                }
            }
        }
        m
    }

    /// `z·B − A` in sparse storage.
    pub fn shifted_sparse(&self, z: C64) -> ComplexSparse {
        self.b
            .to_sparse()
            .linear_combination(z, &self.a.to_sparse(), C64::new(-1.0, 0.0))
            .expect("pencil shapes checked at construction")
    }

    /// LU factorization of `z·B − A`. Succeeds for singular shifts; the
    /// pivot ratio flags them.
    pub fn factor_shifted(
        &self,
        z: C64,
        strategy: FactorStrategy,
    ) -> Result<Factorization, LinalgError> {
        if self.use_dense(strategy) {
            lu_factor(&self.shifted_dense(z)).map(Factorization::Dense)
        } else {
            sparse_lu_factor(&self.shifted_sparse(z)).map(Factorization::Sparse)
        }
    }

    /// LU factorization of `B`, or `None` when `B` is the identity.
    pub fn factor_b(&self, strategy: FactorStrategy) -> Result<Option<Factorization>, LinalgError> {
        let f = match &self.b {
            Operator::Identity(_) => return Ok(None),
            Operator::Dense(b) => Factorization::Dense(lu_factor(b)?),
            Operator::Sparse(b) => {
                if self.use_dense(strategy) {
                    Factorization::Dense(lu_factor(&b.to_dense())?)
                } else {
                    Factorization::Sparse(sparse_lu_factor(b)?)
                }
            }
        };
        Ok(Some(f))
    }

    /// `‖A u − λ B u‖ / ‖u‖` per column.
    pub fn residuals(&self, u: &ComplexDense, lambda: &[C64]) -> Result<Vec<f64>, LinalgError> {
        let au = self.a.apply(u)?;
        let bu = self.b.apply(u)?;
        Ok((0..u.cols())
            .map(|j| {
                let r: Vec<C64> = au
                    .col(j)
                    .iter()
                    .zip(bu.col(j))
                    .map(|(x, y)| x - lambda[j] * y)
                    .collect();
                let nu = norm2(u.col(j));
                if nu == 0.0 {
                    f64::INFINITY
                } else {
                    norm2(&r) / nu
                }
            })
            .collect())
    }
}
