use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contour::Contour;
use crate::linalg::{lu_factor, norm2, qr_orthonormalize, ComplexDense, SolveMode, C64};

use super::{FeastError, Pencil};

/// Bound on `max |(Yᴴ B X − I)_ij|` checked at construction.
pub const BIORTH_TOLERANCE: f64 = 1e-12;

/// Smallest eigenvalue separation relative to the largest modulus.
pub const MIN_RELATIVE_GAP: f64 = 1e-10;

/// A pencil `A = B X Λ Yᴴ B` with known eigendecomposition and `Yᴴ B X = I`.
#[derive(Debug, Clone)]
pub struct SyntheticPencil {
    pub lambdas: Vec<C64>,
    pub x: ComplexDense,
    pub y: ComplexDense,
    pub a: ComplexDense,
    pub b: ComplexDense,
}

impl SyntheticPencil {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn pencil(&self) -> Pencil {
        Pencil::dense(self.a.clone(), self.b.clone()).expect("synthetic pencil is valid")
    }

    /// `‖x_j‖ ‖y_j‖` per eigenpair.
    pub fn conditioning(&self) -> Vec<f64> {
        (0..self.n())
            .map(|j| norm2(self.x.col(j)) * norm2(self.y.col(j)))
            .collect()
    }

    pub fn biorth_defect(&self) -> f64 {
        let bx = self.b.matmul(&self.x).expect("square");
        self.y
            .adjoint_matmul(&bx)
            .expect("square")
            .sub(&ComplexDense::identity(self.n()))
            .expect("square")
            .norm_max()
    }

    pub fn inside(&self, contour: &Contour) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| contour.inside(self.lambdas[j]))
            .collect()
    }

    /// The same pencil in a random orthonormal basis: `(GᴴAG, GᴴBG)` with
    /// `X ↦ GᴴX`, `Y ↦ GᴴY`. Eigenvalues and `‖x_j‖ ‖y_j‖` are unchanged, but
    /// the exact zero structure of the construction is gone, so rounding
    /// errors act on every component. The biorthogonality defect then grows
    /// to about `ε_mach · max ‖x_j‖ ‖y_j‖` and is not checked.
    pub fn unitary_similarity(&self, seed: u64) -> SyntheticPencil {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) =
            qr_orthonormalize(&ComplexDense::random_gaussian(self.n(), self.n(), &mut rng));
        let sim = |m: &ComplexDense| {
            g.adjoint_matmul(&m.matmul(&g).expect("square"))
                .expect("square")
        };
        SyntheticPencil {
            lambdas: self.lambdas.clone(),
            x: g.adjoint_matmul(&self.x).expect("square"),
            y: g.adjoint_matmul(&self.y).expect("square"),
            a: sim(&self.a),
            b: sim(&self.b),
        }
    }

    /// `X ρ(Λ) Yᴴ B U` for a filter evaluated at the eigenvalues.
    pub fn filtered(&self, rho: &[C64], u: &ComplexDense) -> ComplexDense {
        let bu = self.b.matmul(u).expect("dimensions");
        let mut t = self.y.adjoint_matmul(&bu).expect("dimensions");
        for i in 0..t.rows() {
            for j in 0..t.cols() {
                t[(i, j)] *= rho[i];
            }
        }
        self.x.matmul(&t).expect("dimensions")
    }
}

/// Synthetic pencil with `B = I`; see [`make_synthetic_with_b`].
pub fn make_synthetic(lambdas: &[C64], s: f64, seed: u64) -> Result<SyntheticPencil, FeastError> {
    make_synthetic_with_b(lambdas, s, None, seed)
}

/// Build `A = B X Λ X⁻¹` from a random unitary basis.
///
/// For `s > 1` the eigenvectors of the closest eigenvalue pair `(i₁, i₂)` are
/// made nearly parallel: `x_{i₂} = x_{i₁} + δ e_r` with `δ = 1/s`, where `e_r`
/// is orthogonal to every other basis vector, so `‖x_{i₂}‖ ‖y_{i₂}‖ ≈ s`.
/// Writing `X = Q T` with `Q` unitary, `T` and `T⁻¹` differ from the identity
/// only in column `i₂`, which keeps `X⁻¹` exact up to rounding.
pub fn make_synthetic_with_b(
    lambdas: &[C64],
    s: f64,
    b: Option<ComplexDense>,
    seed: u64,
) -> Result<SyntheticPencil, FeastError> {
    let n = lambdas.len();
    if n == 0 {
        return Err(FeastError::Synthetic("no eigenvalues given".into()));
    }
    if lambdas.iter().any(|z| !z.is_finite()) {
        return Err(FeastError::Synthetic("eigenvalues must be finite".into()));
    }
    if !(s >= 1.0 && s.is_finite()) {
        return Err(FeastError::Synthetic(format!(
            "conditioning scale must be finite and at least 1, got {s}"
        )));
    }
    let scale = lambdas
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut closest = (0, 0, f64::INFINITY);
    for i in 0..n {
        for j in i + 1..n {
            let d = (lambdas[i] - lambdas[j]).norm();
            if d < MIN_RELATIVE_GAP * scale {
                return Err(FeastError::Synthetic(format!(
                    "eigenvalues {i} and {j} are repeated (gap {d:e})"
                )));
            }
            if d < closest.2 {
                closest = (i, j, d);
            }
        }
    }
    let b = b.unwrap_or_else(|| ComplexDense::identity(n));
    if b.rows() != n || b.cols() != n {
        return Err(FeastError::Synthetic(format!("B must be {n}x{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deform = s > 1.0 && n >= 2;
    let (q, col) = if deform {
        let (i1, i2, _) = closest;
        let r = rng.random_range(0..n);
        // Unitary on the complement of e_r, placed in every column but i₂.
        let (small, _) = qr_orthonormalize(&ComplexDense::random_gaussian(n - 1, n - 1, &mut rng));
        let mut q = ComplexDense::zeros(n, n);
        let others = (0..n).filter(|&j| j != i2);
        for (c, j) in others.enumerate() {
            for (k, i) in (0..n).filter(|&i| i != r).enumerate() {
                q[(i, j)] = small[(k, c)];
            }
        }
        q[(r, i2)] = C64::new(1.0, 0.0);
        (q, Some((i1, i2)))
    } else {
        let (q, _) = qr_orthonormalize(&ComplexDense::random_gaussian(n, n, &mut rng));
        (q, None)
    };
    let delta = 1.0 / s;
    // T = I except T[i1,i2] = 1, T[i2,i2] = δ; M = T Λ T⁻¹.
    let mut t = ComplexDense::identity(n);
    let mut tinv = ComplexDense::identity(n);
    let mut m = ComplexDense::from_diagonal(lambdas);
    if let Some((i1, i2)) = col {
        t[(i1, i2)] = C64::new(1.0, 0.0);
        t[(i2, i2)] = C64::new(delta, 0.0);
        tinv[(i1, i2)] = C64::new(-1.0 / delta, 0.0);
        tinv[(i2, i2)] = C64::new(1.0 / delta, 0.0);
        m[(i1, i2)] = (lambdas[i2] - lambdas[i1]) / delta;
    }
    let x = q.matmul(&t)?;
    let a = b.matmul(&q.matmul(&m)?.matmul(&q.adjoint())?)?;
    // Y = B⁻ᴴ Q T⁻ᴴ.
    let qt = q.matmul(&tinv.adjoint())?;
    let y = lu_factor(&b)?.solve(&qt, SolveMode::ConjTranspose)?;
    let out = SyntheticPencil {
        lambdas: lambdas.to_vec(),
        x,
        y,
        a,
        b,
    };
    let defect = out.biorth_defect();
    if defect.is_nan() || defect > BIORTH_TOLERANCE {
        return Err(FeastError::Synthetic(format!(
            "biorthogonality defect {defect:e} exceeds {BIORTH_TOLERANCE:e}; reduce the conditioning scale or use B = I"
        )));
    }
    Ok(out)
}
