//! Right and left actions of the filtered spectral projector,
//! `ρ(B⁻¹A)·U = Σ σ_k (φ_k B − A)⁻¹ B U`, with one cached factorization per pole.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::contour::RationalFilter;
use crate::feast::{FactorStrategy, Pencil};
use crate::io::ReIm;
use crate::linalg::{ComplexDense, Factorization, LinalgError, SolveMode, C64};

/// Pivot ratio below which a pole is reported as nearly singular.
pub const NEAR_SINGULAR_PIVOT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectorError {
    #[error("shifted matrix at pole {index} ({pole}) is singular (relative pivot {min_rel_pivot:e}); an eigenvalue lies on or very near the contour")]
    SingularPole {
        index: usize,
        pole: C64,
        min_rel_pivot: f64,
    },
    #[error("{} poles have singular shifted matrices (first: pole {} at {}{:+}i)", .0.len(), .0[0].index, .0[0].pole.re, .0[0].pole.im)]
    SingularPoles(Vec<PoleStats>),
    #[error("block has {found} rows, pencil has dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorOptions {
    pub workers: usize,
    pub strategy: FactorStrategy,
    /// Share one factorization between conjugate poles when the pencil is real.
    pub conjugate_reuse: bool,
}

impl Default for ProjectorOptions {
    fn default() -> Self {
        ProjectorOptions {
            workers: 1,
            strategy: FactorStrategy::Auto,
            conjugate_reuse: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleStats {
    pub index: usize,
    pub pole: ReIm,
    pub factor_seconds: f64,
    pub min_rel_pivot: f64,
    pub worker: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CacheStats {
    /// One entry per stored factorization, ordered by pole index.
    pub factorizations: Vec<PoleStats>,
    /// Factorizations built by the call that produced these statistics.
    pub new_factorizations: usize,
    pub conjugate_reuse: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleWarning {
    pub index: usize,
    pub pole: C64,
    pub min_rel_pivot: f64,
}

#[derive(Debug)]
struct Entry {
    factor: Factorization,
    seconds: f64,
    worker: usize,
}

pub struct ProjectorEngine<'a> {
    pencil: &'a Pencil,
    filter: RationalFilter,
    options: ProjectorOptions,
    /// `source[k] = (slot, conjugated)`: pole `k` is solved with the
    /// factorization in `slot`, conjugating input and output when flagged.
    source: Vec<(usize, bool)>,
    cache: Vec<OnceLock<Entry>>,
    built: AtomicUsize,
}

impl<'a> ProjectorEngine<'a> {
    pub fn new(pencil: &'a Pencil, filter: RationalFilter, options: ProjectorOptions) -> Self {
        let q = filter.len();
        let pairs = if options.conjugate_reuse && pencil.is_real() {
            filter.conjugate_pairs()
        } else {
            None
        };
        let source = match pairs {
            Some(map) => (0..q)
                .map(|k| {
                    if map[k] < k {
                        (map[k], true)
                    } else {
                        (k, false)
                    }
                })
                .collect(),
            None => (0..q).map(|k| (k, false)).collect(),
        };
        ProjectorEngine {
            pencil,
            filter,
            options,
            source,
            cache: (0..q).map(|_| OnceLock::new()).collect(),
            built: AtomicUsize::new(0),
        }
    }

    pub fn filter(&self) -> &RationalFilter {
        &self.filter
    }

    pub fn pencil(&self) -> &Pencil {
        self.pencil
    }

    pub fn workers(&self) -> usize {
        self.options.workers.max(1)
    }

    pub fn set_workers(&mut self, workers: usize) {
        self.options.workers = workers.max(1);
    }

    /// True when conjugate poles share a factorization.
    pub fn uses_conjugate_reuse(&self) -> bool {
        self.source.iter().any(|&(_, c)| c)
    }

    /// Slots that will ever hold a factorization.
    fn slots(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.source.iter().map(|&(slot, _)| slot).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Number of factorizations currently cached.
    pub fn cached(&self) -> usize {
        self.cache.iter().filter(|c| c.get().is_some()).count()
    }

    /// Total factorizations built over the engine's lifetime.
    pub fn factorizations_built(&self) -> usize {
        self.built.load(Ordering::Relaxed)
    }

    fn entry(&self, slot: usize, worker: usize) -> Result<&Entry, ProjectorError> {
        if let Some(e) = self.cache[slot].get() {
            return Ok(e);
        }
        let start = now();
        let factor = self
            .pencil
            .factor_shifted(self.filter.poles()[slot], self.options.strategy)?;
        let seconds = elapsed(start);
        let mut fresh = false;
        let e = self.cache[slot].get_or_init(|| {
            fresh = true;
            Entry {
                factor,
                seconds,
                worker,
            }
        });
        if fresh {
            self.built.fetch_add(1, Ordering::Relaxed);
        }
        Ok(e)
    }

    fn solve_pole(
        &self,
        k: usize,
        rhs: &ComplexDense,
        mode: SolveMode,
        worker: usize,
    ) -> Result<ComplexDense, ProjectorError> {
        let (slot, conjugated) = self.source[k];
        let e = self.entry(slot, worker)?;
        let singular = |err| match err {
            LinalgError::Singular { min_rel_pivot } => ProjectorError::SingularPole {
                index: k,
                pole: self.filter.poles()[k],
                min_rel_pivot,
            },
            other => ProjectorError::Linalg(other),
        };
        if conjugated {
            // conj(M) x = b  ⟺  M conj(x) = conj(b), likewise for the adjoint.
            Ok(e.factor.solve(&rhs.conj(), mode).map_err(singular)?.conj())
        } else {
            e.factor.solve(rhs, mode).map_err(singular)
        }
    }

    /// Run `f(item, worker)` for every item, dealing items round-robin to
    /// workers; results keep item order.
    fn run<T: Send>(&self, items: &[usize], f: impl Fn(usize, usize) -> T + Sync) -> Vec<T> {
        let workers = self.workers().min(items.len().max(1));
        if workers == 1 {
            return items.iter().map(|&k| f(k, 0)).collect();
        }
        let mut out: Vec<Option<T>> = (0..items.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let f = &f;
                    scope.spawn(move || {
                        (w..items.len())
                            .step_by(workers)
                            .map(|i| (i, f(items[i], w)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, v) in h.join().expect("projector worker panicked") {
                    out[i] = Some(v);
                }
            }
        });
        out.into_iter()
            .map(|v| v.expect("every item assigned"))
            .collect()
    }

    fn accumulate(
        &self,
        rhs: &ComplexDense,
        mode: SolveMode,
    ) -> Result<ComplexDense, ProjectorError> {
        let poles: Vec<usize> = (0..self.filter.len()).collect();
        let parts = self.run(&poles, |k, w| self.solve_pole(k, rhs, mode, w));
        let mut acc = ComplexDense::zeros(rhs.rows(), rhs.cols());
        // Fixed summation order keeps results independent of the worker count.
        for (k, part) in parts.into_iter().enumerate() {
            let s = self.filter.coeffs()[k];
            let s = if mode == SolveMode::ConjTranspose {
                s.conj()
            } else {
                s
            };
            acc.axpy(s, &part?)?;
        }
        Ok(acc)
    }

    fn check(&self, x: &ComplexDense) -> Result<(), ProjectorError> {
        if x.rows() != self.pencil.n() {
            return Err(ProjectorError::Dimension {
                expected: self.pencil.n(),
                found: x.rows(),
            });
        }
        Ok(())
    }

    /// `Σ σ_k (φ_k B − A)⁻¹ B U`.
    pub fn apply_right(&self, u: &ComplexDense) -> Result<ComplexDense, ProjectorError> {
        self.check(u)?;
        let bu = self.pencil.b().apply(u)?;
        self.accumulate(&bu, SolveMode::Direct)
    }

    /// `Σ conj(σ_k) (φ_k B − A)⁻ᴴ Bᴴ V`, the adjoint of the right action.
    pub fn apply_left(&self, v: &ComplexDense) -> Result<ComplexDense, ProjectorError> {
        self.check(v)?;
        let bv = self.pencil.b().apply_adjoint(v)?;
        self.accumulate(&bv, SolveMode::ConjTranspose)
    }

    /// Build every missing factorization using `workers` threads.
    pub fn warm_cache(&self, workers: usize) -> Result<CacheStats, ProjectorError> {
        let before = self.factorizations_built();
        let slots = self.slots();
        let workers = workers.max(1).min(slots.len().max(1));
        let run_one = |slot: usize, w: usize| self.entry(slot, w).map(|_| ());
        let results: Vec<Result<(), ProjectorError>> = if workers == 1 {
            slots.iter().map(|&s| run_one(s, 0)).collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let slots = &slots;
                        let run_one = &run_one;
                        scope.spawn(move || {
                            slots
                                .iter()
                                .skip(w)
                                .step_by(workers)
                                .map(|&s| run_one(s, w))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("projector worker panicked"))
                    .collect()
            })
        };
        for r in results {
            r?;
        }
        let mut stats = self.stats();
        stats.new_factorizations = self.factorizations_built() - before;
        let singular: Vec<PoleStats> = stats
            .factorizations
            .iter()
            .filter(|s| s.min_rel_pivot < crate::linalg::SINGULAR_PIVOT_RATIO)
            .cloned()
            .collect();
        if !singular.is_empty() {
            return Err(ProjectorError::SingularPoles(singular));
        }
        Ok(stats)
    }

    /// Statistics for the factorizations cached so far.
    pub fn stats(&self) -> CacheStats {
        let factorizations = self
            .cache
            .iter()
            .enumerate()
            .filter_map(|(k, c)| {
                c.get().map(|e| PoleStats {
                    index: k,
                    pole: self.filter.poles()[k].into(),
                    factor_seconds: e.seconds,
                    min_rel_pivot: e.factor.min_rel_pivot(),
                    worker: e.worker,
                })
            })
            .collect();
        CacheStats {
            factorizations,
            new_factorizations: 0,
            conjugate_reuse: self.uses_conjugate_reuse(),
        }
    }

    /// Cached poles whose shifted matrix is nearly singular, reported for
    /// every pole that shares the factorization.
    pub fn warnings(&self) -> Vec<PoleWarning> {
        self.source
            .iter()
            .enumerate()
            .filter_map(|(k, &(slot, _))| {
                let e = self.cache[slot].get()?;
                let r = e.factor.min_rel_pivot();
                (r < NEAR_SINGULAR_PIVOT).then(|| PoleWarning {
                    index: k,
                    pole: self.filter.poles()[k],
                    min_rel_pivot: r,
                })
            })
            .collect()
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<std::time::Instant> {
    Some(std::time::Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<std::time::Instant> {
    None
}

fn elapsed(start: Option<std::time::Instant>) -> f64 {
    start.map_or(0.0, |s| s.elapsed().as_secs_f64())
}
