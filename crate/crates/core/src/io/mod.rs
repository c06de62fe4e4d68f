//! Matrix Market files, contour and spectrum files, run specifications and
//! result writers.

mod contour_file;
mod matrix_market;
mod run_spec;

pub use contour_file::{contour_from_json, contour_to_json, read_contour_file, SegmentSpec};
pub use matrix_market::{
    matrix_market_string, parse_matrix_market, parse_matrix_market_str, read_matrix_market,
    write_matrix_market, MatrixMarket, MmField, MmFormat, MmHeader, MmSymmetry,
};
pub use run_spec::{parse_spectrum, read_spectrum, write_text, ContourSource, RunSpec};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::ContourError;
use crate::feast::{FeastError, PencilError};
use crate::linalg::{LinalgError, C64};

/// Complex number as `{"re": .., "im": ..}` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ReIm {
    fn from(z: C64) -> Self {
        ReIm { re: z.re, im: z.im }
    }
}

impl From<ReIm> for C64 {
    fn from(z: ReIm) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed Matrix Market header: {0}")]
    Header(String),
    #[error("pattern-only Matrix Market files carry no values and are not supported")]
    Pattern,
    #[error("line {line}: {message}")]
    Entry { line: usize, message: String },
    #[error("line {line}: index ({row}, {col}) out of range")]
    IndexOutOfRange { line: usize, row: usize, col: usize },
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
    #[error("contour file: {0}")]
    ContourFile(String),
    #[error("invalid run specification: {0}")]
    Config(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Feast(#[from] FeastError),
}

impl IoError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        IoError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}
