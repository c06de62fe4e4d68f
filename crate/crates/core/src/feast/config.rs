use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contour::{Contour, QuadratureRule};
use crate::linalg::{ComplexDense, C64};
use crate::projector::ProjectorOptions;

use super::{FactorStrategy, FeastError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Right-subspace iteration.
    R,
    /// Two-sided iteration with biorthogonal left and right subspaces.
    Bi,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::R => "r",
            Variant::Bi => "bi",
        })
    }
}

impl FromStr for Variant {
    type Err = FeastError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "r-feast" => Ok(Variant::R),
            "bi" | "bi-feast" => Ok(Variant::Bi),
            other => Err(FeastError::Config(format!(
                "unknown variant '{other}' (expected r or bi)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeastConfig {
    pub contour: Contour,
    pub rule: QuadratureRule,
    /// Subspace dimension `p`.
    pub subspace: usize,
    pub variant: Variant,
    pub max_iter: usize,
    /// Stop when the relative change of the candidate trace falls below this.
    pub tol_trace: f64,
    /// Ritz pairs inside the contour with residual at most this are candidates.
    pub tol_candidate: f64,
    /// Stop when every candidate residual falls below this.
    pub tol_residual: f64,
    /// Orthonormalize the filtered block before the Rayleigh-Ritz step (R variant).
    pub orthogonalize: bool,
    pub seed: u64,
    pub workers: usize,
    pub strategy: FactorStrategy,
    pub conjugate_reuse: bool,
    /// Starting block; drawn from the seeded generator when absent.
    pub initial: Option<ComplexDense>,
}

impl FeastConfig {
    pub fn new(contour: Contour, rule: QuadratureRule, subspace: usize) -> Self {
        FeastConfig {
            contour,
            rule,
            subspace,
            variant: Variant::R,
            max_iter: 30,
            tol_trace: 1e-12,
            tol_candidate: 1e-4,
            tol_residual: 1e-10,
            orthogonalize: true,
            seed: 0,
            workers: 1,
            strategy: FactorStrategy::Auto,
            conjugate_reuse: true,
            initial: None,
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self, n: usize) -> Result<(), FeastError> {
        if self.subspace == 0 {
            return Err(FeastError::Config(
                "subspace dimension must be at least 1".into(),
            ));
        }
        if self.subspace > n {
            return Err(FeastError::Config(format!(
                "subspace dimension {} exceeds problem size {n}",
                self.subspace
            )));
        }
        if self.max_iter == 0 {
            return Err(FeastError::Config("max_iter must be at least 1".into()));
        }
        for (name, v) in [
            ("tol_trace", self.tol_trace),
            ("tol_candidate", self.tol_candidate),
            ("tol_residual", self.tol_residual),
        ] {
            if v.is_nan() || v <= 0.0 {
                return Err(FeastError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if let Some(u) = &self.initial {
            if u.rows() != n || u.cols() != self.subspace {
                return Err(FeastError::Config(format!(
                    "initial block is {}x{}, expected {n}x{}",
                    u.rows(),
                    u.cols(),
                    self.subspace
                )));
            }
        }
        Ok(())
    }

    pub fn projector_options(&self) -> ProjectorOptions {
        ProjectorOptions {
            workers: self.workers.max(1),
            strategy: self.strategy,
            conjugate_reuse: self.conjugate_reuse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    TraceConverged,
    ResidualConverged,
    MaxIterations,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::TraceConverged => "trace_converged",
            Termination::ResidualConverged => "residual_converged",
            Termination::MaxIterations => "max_iterations",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Largest candidate residual; `None` when there are no candidates.
    pub max_residual: Option<f64>,
    /// Sum of candidate eigenvalues.
    pub trace: C64,
    pub candidates: usize,
    /// Numerical rank of the filtered block.
    pub rank: usize,
}

impl IterationRecord {
    pub fn res_log10(&self) -> Option<f64> {
        self.max_residual.map(f64::log10)
    }
}

#[derive(Debug, Clone)]
pub struct FeastResult {
    pub variant: Variant,
    /// All Ritz values of the final iteration.
    pub eigenvalues: Vec<C64>,
    pub right: ComplexDense,
    pub left: Option<ComplexDense>,
    pub residuals: Vec<f64>,
    pub candidates: Vec<bool>,
    pub history: Vec<IterationRecord>,
    pub iterations: usize,
    pub termination: Termination,
    pub factorizations: usize,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct EigenvalueJson {
    re: f64,
    im: f64,
    candidate: bool,
    residual: f64,
}

#[derive(Serialize)]
struct HistoryJson {
    iter: usize,
    res_log10: Option<f64>,
    trace_re: f64,
    trace_im: f64,
}

#[derive(Serialize)]
struct ResultJson<'a> {
    eigenvalues: Vec<EigenvalueJson>,
    iterations: usize,
    termination: Termination,
    history: Vec<HistoryJson>,
    variant: Variant,
    warnings: &'a [String],
}

impl FeastResult {
    pub fn candidate_indices(&self) -> Vec<usize> {
        (0..self.eigenvalues.len())
            .filter(|&j| self.candidates[j])
            .collect()
    }

    pub fn candidate_eigenvalues(&self) -> Vec<C64> {
        self.candidate_indices()
            .into_iter()
            .map(|j| self.eigenvalues[j])
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.candidate_eigenvalues().into_iter().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = ResultJson {
            eigenvalues: self
                .eigenvalues
                .iter()
                .zip(&self.candidates)
                .zip(&self.residuals)
                .map(|((z, &candidate), &residual)| EigenvalueJson {
                    re: z.re,
                    im: z.im,
                    candidate,
                    residual,
                })
                .collect(),
            iterations: self.iterations,
            termination: self.termination,
            history: self
                .history
                .iter()
                .map(|h| HistoryJson {
                    iter: h.iter,
                    res_log10: h.res_log10(),
                    trace_re: h.trace.re,
                    trace_im: h.trace.im,
                })
                .collect(),
            variant: self.variant,
            warnings: &self.warnings,
        };
        serde_json::to_value(doc).expect("result serializes")
    }

    /// CSV with header `iter,res_log10,trace_re,trace_im,candidates,rank`;
    /// `res_log10` is empty when an iteration had no candidates.
    pub fn history_csv(&self) -> String {
        let mut out = String::from("iter,res_log10,trace_re,trace_im,candidates,rank\n");
        for h in &self.history {
            let res = h
                .res_log10()
                .map(|v| format!("{v:.16e}"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{res},{:.16e},{:.16e},{},{}",
                h.iter, h.trace.re, h.trace.im, h.candidates, h.rank
            );
        }
        out
    }
}
