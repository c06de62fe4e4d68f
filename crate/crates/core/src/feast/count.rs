use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::{build_filter, Contour, QuadratureRule};
use crate::io::ReIm;
use crate::linalg::{dense_eig, pivoted_orthonormalize_with, ComplexDense, C64};
use crate::projector::{ProjectorEngine, ProjectorOptions};

use super::driver::biorthonormal_left;
use super::{FeastConfig, FeastError, Pencil};

/// Filter values above this modulus are counted as inside.
pub const COUNT_THRESHOLD: f64 = 0.5;

/// Relative rank threshold applied to the filtered probe block.
pub const PROBE_RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountEstimate {
    pub estimate: usize,
    /// Approximations of `ρ(λ)` for the dominant eigenvalues, by decreasing modulus.
    pub values: Vec<ReIm>,
    pub probe: usize,
    /// Numerical rank of the filtered probe block.
    pub rank: usize,
    /// Every retained value exceeded the threshold, so `m` may be larger.
    pub saturated: bool,
}

/// Estimate the number of eigenvalues inside `contour` from one two-sided
/// filtered step.
///
/// With `Û = ρ(M)U₀`, `V̂` the left-filtered `V₀` and `V₀ᴴ B U₀ = I`, the
/// pencil `(V̂ᴴ B Û, V₀ᴴ B Û)` has eigenvalues approximating the dominant
/// `ρ(λ_j)`; those above one half are counted.
pub fn estimate_count(
    pencil: &Pencil,
    contour: &Contour,
    rule: &QuadratureRule,
    probe: usize,
    seed: u64,
    options: ProjectorOptions,
) -> Result<CountEstimate, FeastError> {
    let n = pencil.n();
    if probe == 0 || probe > n {
        return Err(FeastError::Config(format!(
            "probe dimension must be in 1..={n}, got {probe}"
        )));
    }
    let engine = ProjectorEngine::new(pencil, build_filter(contour, rule), options);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u0 = ComplexDense::random_gaussian(n, probe, &mut rng);
    let uh = engine.apply_right(&u0)?;
    let o = pivoted_orthonormalize_with(&uh, PROBE_RANK_TOLERANCE);
    let rank = o.rank;
    if rank == 0 {
        return Ok(CountEstimate {
            estimate: 0,
            values: Vec::new(),
            probe,
            rank,
            saturated: false,
        });
    }
    let keep = &o.pivots[..rank];
    let (u0, uh) = (u0.select_columns(keep), uh.select_columns(keep));
    let mut cfg = FeastConfig::new(contour.clone(), rule.clone(), rank);
    cfg.strategy = options.strategy;
    let v0 = biorthonormal_left(pencil, &u0, &cfg)?;
    let vh = engine.apply_left(&v0)?;
    let buh = pencil.b().apply(&uh)?;
    let num = vh.adjoint_matmul(&buh)?;
    let den = v0.adjoint_matmul(&buh)?;
    let mut values: Vec<C64> = dense_eig(&num, &den, false)?.eigenvalues;
    values.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let estimate = values.iter().filter(|z| z.norm() > COUNT_THRESHOLD).count();
    Ok(CountEstimate {
        estimate,
        saturated: estimate == rank,
        values: values.into_iter().map(ReIm::from).collect(),
        probe,
        rank,
    })
}
