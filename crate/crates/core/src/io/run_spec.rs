use std::fs;
use std::path::{Path, PathBuf};

use crate::contour::{Contour, QuadratureRule, RuleKind};
use crate::feast::{FactorStrategy, FeastConfig, Operator, Pencil, Variant};
use crate::linalg::C64;

use super::{parse_matrix_market, read_contour_file, IoError};

#[derive(Debug, Clone, PartialEq)]
pub enum ContourSource {
    Ellipse {
        center: C64,
        radius: f64,
        aspect: f64,
    },
    File(PathBuf),
}

impl ContourSource {
    pub fn build(&self) -> Result<Contour, IoError> {
        match self {
            ContourSource::Ellipse {
                center,
                radius,
                aspect,
            } => Ok(Contour::ellipse(*center, *radius, *aspect)?),
            ContourSource::File(path) => read_contour_file(path),
        }
    }
}

/// Everything needed to set up one solver run from files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub matrix_a: PathBuf,
    /// Identity when absent.
    pub matrix_b: Option<PathBuf>,
    pub contour: ContourSource,
    pub rule: RuleKind,
    pub nodes: usize,
    pub subspace: usize,
    pub variant: Variant,
    pub tol_trace: f64,
    pub tol_residual: f64,
    pub tol_candidate: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    /// Defaults match [`FeastConfig::new`]: Gauss-Legendre with 8 nodes.
    pub fn new(matrix_a: impl Into<PathBuf>, contour: ContourSource, subspace: usize) -> Self {
        let base = FeastConfig::new(
            Contour::circle(C64::new(0.0, 0.0), 1.0).expect("unit circle"),
            QuadratureRule::new(RuleKind::GaussLegendre, 1).expect("one node"),
            subspace,
        );
        RunSpec {
            matrix_a: matrix_a.into(),
            matrix_b: None,
            contour,
            rule: RuleKind::GaussLegendre,
            nodes: 8,
            subspace,
            variant: base.variant,
            tol_trace: base.tol_trace,
            tol_residual: base.tol_residual,
            tol_candidate: base.tol_candidate,
            max_iter: base.max_iter,
            seed: base.seed,
            workers: base.workers,
            out: None,
        }
    }

    /// Checks that do not touch the file system.
    pub fn validate(&self) -> Result<(), IoError> {
        if self.subspace == 0 {
            return Err(IoError::Config(
                "subspace dimension must be at least 1".into(),
            ));
        }
        if self.workers == 0 {
            return Err(IoError::Config("worker count must be at least 1".into()));
        }
        QuadratureRule::new(self.rule, self.nodes)?;
        Ok(())
    }

    pub fn load_pencil(&self) -> Result<Pencil, IoError> {
        let a = Operator::Sparse(parse_matrix_market(&self.matrix_a)?);
        let b = match &self.matrix_b {
            Some(path) => Operator::Sparse(parse_matrix_market(path)?),
            None => Operator::Identity(a.dim().0),
        };
        Ok(Pencil::new(a, b)?)
    }

    /// Solver configuration for a pencil of size `n`, validated.
    pub fn config(&self, n: usize) -> Result<FeastConfig, IoError> {
        self.validate()?;
        let mut cfg = FeastConfig::new(
            self.contour.build()?,
            QuadratureRule::new(self.rule, self.nodes)?,
            self.subspace,
        )
        .with_variant(self.variant)
        .with_seed(self.seed)
        .with_max_iter(self.max_iter);
        cfg.tol_trace = self.tol_trace;
        cfg.tol_residual = self.tol_residual;
        cfg.tol_candidate = self.tol_candidate;
        cfg.workers = self.workers;
        cfg.strategy = FactorStrategy::Auto;
        cfg.validate(n)?;
        Ok(cfg)
    }

    /// Load the pencil and build its configuration.
    pub fn prepare(&self) -> Result<(Pencil, FeastConfig), IoError> {
        self.validate()?;
        let pencil = self.load_pencil()?;
        let cfg = self.config(pencil.n())?;
        Ok((pencil, cfg))
    }
}

/// Parse a list of eigenvalues, one per line as `re im` or `re,im` (a lone
/// number is real). Blank lines, `#` comments and a non-numeric first line
/// (a CSV header) are skipped.
pub fn parse_spectrum(text: &str) -> Result<Vec<C64>, IoError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let nums: Result<Vec<f64>, _> = toks.iter().map(|t| t.parse::<f64>()).collect();
        match nums {
            Ok(v) if v.len() == 1 || v.len() == 2 => {
                let z = C64::new(v[0], v.get(1).copied().unwrap_or(0.0));
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(IoError::Entry {
                        line: i + 1,
                        message: "non-finite eigenvalue".into(),
                    });
                }
                out.push(z);
            }
            Err(_) if out.is_empty() && i == 0 => continue,
            _ => {
                return Err(IoError::Entry {
                    line: i + 1,
                    message: format!("expected 're im' or 're,im', got '{line}'"),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_spectrum(path: impl AsRef<Path>) -> Result<Vec<C64>, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_spectrum(&text)
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), IoError> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| IoError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| IoError::io(path, e))
}
