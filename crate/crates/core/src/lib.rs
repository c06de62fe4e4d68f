//! Quadrature-accelerated subspace iteration for non-Hermitian generalized
//! eigenproblems `A x = λ B x`.
//!
//! Eigenvalues inside a closed contour are isolated by a rational filter
//! `ρ(μ) = Σ σ_k / (φ_k − μ)` obtained from a quadrature rule applied to the
//! Cauchy integral of the contour. The filter is applied to a block of vectors
//! by solving `(φ_k B − A) X = B U` for every pole, and the filtered block feeds
//! a Rayleigh-Ritz step. Two drivers are provided: [`feast::r_feast`], which
//! iterates on the right subspace only, and [`feast::bi_feast`], which iterates
//! left and right subspaces together.

pub mod contour;
pub mod feast;
pub mod io;
pub mod linalg;
pub mod projector;

pub use linalg::C64;
