use serde::Serialize;

use crate::contour::{Contour, RationalFilter};
use crate::io::ReIm;
use crate::linalg::C64;

use super::FeastError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapEntry {
    /// Position in the input eigenvalue list.
    pub index: usize,
    pub eigenvalue: ReIm,
    /// `|ρ(λ)|`.
    pub gamma: f64,
    pub inside: bool,
}

/// Eigenvalues ordered by `|ρ(λ)|` and the resulting convergence ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterGapReport {
    /// Descending in `gamma`; ties keep input order.
    pub sorted: Vec<GapEntry>,
    pub p: usize,
    /// Eigenvalues strictly inside the contour.
    pub m: usize,
    /// Smallest 1-based position such that the first `m′` sorted entries hold
    /// every inside eigenvalue and `|γ_{m′}| > |γ_{m′+1}|`.
    pub m_prime: usize,
    /// `|γ_{p+1}| / |γ_{m′}|`; `None` when there is no target.
    pub epsilon: Option<f64>,
    /// `log10 |γ_{p+1}| / |γ_m|`; `None` when there is no target.
    pub log10_gap: Option<f64>,
    pub empty_target: bool,
}

pub fn filter_gap(
    filter: &RationalFilter,
    eigenvalues: &[C64],
    contour: &Contour,
    p: usize,
) -> Result<FilterGapReport, FeastError> {
    let n = eigenvalues.len();
    if p >= n {
        return Err(FeastError::Config(format!(
            "subspace dimension {p} must be smaller than the number of eigenvalues {n}"
        )));
    }
    let mut sorted = Vec::with_capacity(n);
    for (index, &z) in eigenvalues.iter().enumerate() {
        sorted.push(GapEntry {
            index,
            eigenvalue: z.into(),
            gamma: filter.eval(z)?.norm(),
            inside: contour.inside(z),
        });
    }
    sorted.sort_by(|a, b| b.gamma.total_cmp(&a.gamma).then(a.index.cmp(&b.index)));
    let m = sorted.iter().filter(|e| e.inside).count();
    if m == 0 {
        return Ok(FilterGapReport {
            sorted,
            p,
            m,
            m_prime: 0,
            epsilon: None,
            log10_gap: None,
            empty_target: true,
        });
    }
    let mut m_prime = sorted.iter().rposition(|e| e.inside).expect("m > 0") + 1;
    while m_prime < n && sorted[m_prime].gamma == sorted[m_prime - 1].gamma {
        m_prime += 1;
    }
    let next = sorted[p].gamma;
    Ok(FilterGapReport {
        p,
        m,
        m_prime,
        epsilon: Some(next / sorted[m_prime - 1].gamma),
        log10_gap: Some((next / sorted[m - 1].gamma).log10()),
        empty_target: false,
        sorted,
    })
}
