use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contour::{build_filter, Location};
use crate::linalg::{dense_eig, lu_factor, pivoted_orthonormalize, ComplexDense, SolveMode, C64};
use crate::projector::ProjectorEngine;

use super::config::{FeastConfig, FeastResult, IterationRecord, Termination, Variant};
use super::{FeastError, Pencil};

/// `|det B̂|` relative to the product of its column norms below which the
/// two-sided reduction is considered broken down.
pub const BREAKDOWN_DET: f64 = 1e-280;

/// Right-subspace iteration.
pub fn r_feast(pencil: &Pencil, config: &FeastConfig) -> Result<FeastResult, FeastError> {
    run(pencil, config, Variant::R)
}

/// Two-sided iteration on biorthogonal left and right subspaces.
pub fn bi_feast(pencil: &Pencil, config: &FeastConfig) -> Result<FeastResult, FeastError> {
    run(pencil, config, Variant::Bi)
}

/// Dispatch on `config.variant`.
pub fn solve(pencil: &Pencil, config: &FeastConfig) -> Result<FeastResult, FeastError> {
    run(pencil, config, config.variant)
}

/// `V` with `Vᴴ B U = I`: `V₀ = B⁻ᴴ U`, then `V = V₀ (V₀ᴴ B U)⁻ᴴ`.
pub fn biorthonormal_left(
    pencil: &Pencil,
    u: &ComplexDense,
    config: &FeastConfig,
) -> Result<ComplexDense, FeastError> {
    let v0 = match pencil.factor_b(config.strategy)? {
        None => u.clone(),
        Some(fb) => fb.solve(u, SolveMode::ConjTranspose)?,
    };
    let g = v0.adjoint_matmul(&pencil.b().apply(u)?)?;
    let vh = lu_factor(&g)?.solve(&v0.adjoint(), SolveMode::Direct)?;
    Ok(vh.adjoint())
}

struct Step {
    lambda: Vec<C64>,
    u: ComplexDense,
    v: Option<ComplexDense>,
    rank: usize,
}

fn run(pencil: &Pencil, config: &FeastConfig, variant: Variant) -> Result<FeastResult, FeastError> {
    let n = pencil.n();
    config.validate(n)?;
    let p = config.subspace;
    let filter = build_filter(&config.contour, &config.rule);
    let engine = ProjectorEngine::new(pencil, filter, config.projector_options());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut u = match &config.initial {
        Some(u0) => u0.clone(),
        None => ComplexDense::random_gaussian(n, p, &mut rng),
    };
    let mut v = match variant {
        Variant::R => None,
        Variant::Bi => Some(biorthonormal_left(pencil, &u, config)?),
    };
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut termination = Termination::MaxIterations;
    let mut last = None;
    for iter in 1..=config.max_iter {
        let needed = history.last().map_or(0, |h| h.candidates);
        let step = match variant {
            Variant::R => r_step(pencil, config, &engine, &u, needed)?,
            Variant::Bi => bi_step(
                pencil,
                &engine,
                &u,
                v.as_ref().expect("left block"),
                needed,
                iter,
            )?,
        };
        u = step.u;
        v = step.v;
        let residuals = pencil.residuals(&u, &step.lambda)?;
        let mut candidates = Vec::with_capacity(step.lambda.len());
        for (&z, &r) in step.lambda.iter().zip(&residuals) {
            let loc = config.contour.locate(z);
            if loc == Location::OnBoundary && r <= config.tol_candidate {
                let msg =
                    format!("Ritz value {z} lies on the contour and is not counted as a candidate");
                if !warnings.contains(&msg) {
                    warnings.push(msg);
                }
            }
            candidates.push(loc == Location::Inside && r <= config.tol_candidate);
        }
        let cand: Vec<usize> = (0..candidates.len()).filter(|&j| candidates[j]).collect();
        let trace: C64 = cand.iter().map(|&j| step.lambda[j]).sum();
        let max_residual = cand.iter().map(|&j| residuals[j]).reduce(f64::max);
        let record = IterationRecord {
            iter,
            max_residual,
            trace,
            candidates: cand.len(),
            rank: step.rank,
        };
        let stop = if cand.is_empty() {
            None
        } else if max_residual.is_some_and(|r| r < config.tol_residual) {
            Some(Termination::ResidualConverged)
        } else {
            history
                .last()
                .filter(|h| h.candidates == cand.len())
                .and_then(|h| {
                    let scale = cand
                        .iter()
                        .map(|&j| step.lambda[j].norm())
                        .sum::<f64>()
                        .max(trace.norm());
                    let change = (trace - h.trace).norm() / scale;
                    (change < config.tol_trace).then_some(Termination::TraceConverged)
                })
        };
        history.push(record);
        last = Some((step.lambda, residuals, candidates));
        if let Some(t) = stop {
            termination = t;
            break;
        }
    }
    for w in engine.warnings() {
        warnings.push(format!(
            "pole {} at {} is nearly singular (relative pivot {:e})",
            w.index, w.pole, w.min_rel_pivot
        ));
    }
    let (eigenvalues, residuals, candidates) = last.expect("at least one iteration");
    Ok(FeastResult {
        variant,
        eigenvalues,
        right: u,
        left: v,
        residuals,
        candidates,
        iterations: history.len(),
        history,
        termination,
        factorizations: engine.factorizations_built(),
        warnings,
    })
}

fn r_step(
    pencil: &Pencil,
    config: &FeastConfig,
    engine: &ProjectorEngine<'_>,
    u: &ComplexDense,
    needed: usize,
) -> Result<Step, FeastError> {
    let uh = engine.apply_right(u)?;
    let o = pivoted_orthonormalize(&uh);
    if o.rank == 0 || o.rank < needed {
        return Err(FeastError::RankCollapse {
            rank: o.rank,
            needed: needed.max(1),
        });
    }
    let basis = if config.orthogonalize {
        o.q
    } else {
        uh.select_columns(&o.pivots[..o.rank])
    };
    let ah = basis.adjoint_matmul(&pencil.a().apply(&basis)?)?;
    let bh = basis.adjoint_matmul(&pencil.b().apply(&basis)?)?;
    let eig = dense_eig(&ah, &bh, false)?;
    Ok(Step {
        lambda: eig.eigenvalues,
        u: basis.matmul(&eig.right)?,
        v: None,
        rank: o.rank,
    })
}

fn bi_step(
    pencil: &Pencil,
    engine: &ProjectorEngine<'_>,
    u: &ComplexDense,
    v: &ComplexDense,
    needed: usize,
    iter: usize,
) -> Result<Step, FeastError> {
    let uh = engine.apply_right(u)?;
    let vh = engine.apply_left(v)?;
    let o = pivoted_orthonormalize(&uh);
    if o.rank == 0 || o.rank < needed {
        return Err(FeastError::RankCollapse {
            rank: o.rank,
            needed: needed.max(1),
        });
    }
    let (uh, vh) = if o.rank < uh.cols() {
        let keep = &o.pivots[..o.rank];
        (uh.select_columns(keep), vh.select_columns(keep))
    } else {
        (uh, vh)
    };
    let ah = vh.adjoint_matmul(&pencil.a().apply(&uh)?)?;
    let bh = vh.adjoint_matmul(&pencil.b().apply(&uh)?)?;
    let f = lu_factor(&bh)?;
    let hadamard: f64 = bh.column_norms().iter().map(|c| c.ln()).sum();
    let rel_det = (f.log_abs_det() - hadamard).exp();
    if f.is_singular() || rel_det.is_nan() || rel_det < BREAKDOWN_DET {
        return Err(FeastError::Breakdown {
            iteration: iter,
            rel_det,
        });
    }
    let eig = dense_eig(&ah, &bh, true)?;
    let mut un = uh.matmul(&eig.right)?;
    let mut vn = vh.matmul(eig.left.as_ref().expect("left vectors requested"))?;
    // Unit right columns; the inverse scaling on the left keeps Vᴴ B U = I.
    for j in 0..un.cols() {
        let s = crate::linalg::norm2(un.col(j));
        if s > 0.0 {
            un.col_mut(j).iter_mut().for_each(|z| *z /= s);
            vn.col_mut(j).iter_mut().for_each(|z| *z *= s);
        }
    }
    Ok(Step {
        lambda: eig.eigenvalues,
        u: un,
        v: Some(vn),
        rank: o.rank,
    })
}
