//! Filtered subspace iteration drivers, diagnostics and synthetic test pencils.

mod config;
mod count;
mod driver;
mod gap;
mod pencil;
mod synthetic;

pub use config::{FeastConfig, FeastResult, IterationRecord, Termination, Variant};
pub use count::{estimate_count, CountEstimate, COUNT_THRESHOLD, PROBE_RANK_TOLERANCE};
pub use driver::{bi_feast, biorthonormal_left, r_feast, solve, BREAKDOWN_DET};
pub use gap::{filter_gap, FilterGapReport, GapEntry};
pub use pencil::{FactorStrategy, Operator, Pencil, PencilError, DENSE_CUTOFF};
pub use synthetic::{
    make_synthetic, make_synthetic_with_b, SyntheticPencil, BIORTH_TOLERANCE, MIN_RELATIVE_GAP,
};

use thiserror::Error;

use crate::contour::ContourError;
use crate::linalg::LinalgError;
use crate::projector::ProjectorError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeastError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Projector(#[from] ProjectorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("filtered subspace has rank {rank} but {needed} directions are needed; increase the subspace dimension")]
    RankCollapse { rank: usize, needed: usize },
    #[error("biorthogonality broke down at iteration {iteration} (relative det {rel_det:e}); the right-only variant is more robust here")]
    Breakdown { iteration: usize, rel_det: f64 },
    #[error("synthetic pencil: {0}")]
    Synthetic(String),
}
