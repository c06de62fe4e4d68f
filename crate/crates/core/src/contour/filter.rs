use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::linalg::C64;

use super::quadrature::QuadratureRule;
use super::shape::Contour;
use super::ContourError;

/// Poles closer than this fraction of the contour diameter are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// `μ` closer than this fraction of the scale to a pole is a collision.
pub const COLLISION_TOLERANCE: f64 = 1e-14;

/// `ρ(μ) = Σ σ_k / (φ_k − μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFilter {
    poles: Vec<C64>,
    coeffs: Vec<C64>,
    scale: f64,
}

impl RationalFilter {
    /// Apply `rule` on every segment of `contour`; coincident poles are merged
    /// by summing their coefficients.
    pub fn build(contour: &Contour, rule: &QuadratureRule) -> Self {
        let scale = contour.diameter();
        let tol = MERGE_TOLERANCE * scale;
        let mut poles: Vec<C64> = Vec::new();
        let mut coeffs: Vec<C64> = Vec::new();
        for (z, s) in raw_terms(contour, rule) {
            match poles.iter().position(|p| (p - z).norm() <= tol) {
                Some(k) => coeffs[k] += s,
                None => {
                    poles.push(z);
                    coeffs.push(s);
                }
            }
        }
        RationalFilter {
            poles,
            coeffs,
            scale,
        }
    }

    /// Filter from explicit poles and coefficients; `scale` sets the collision tolerance.
    pub fn from_parts(poles: Vec<C64>, coeffs: Vec<C64>, scale: f64) -> Result<Self, ContourError> {
        if poles.len() != coeffs.len() || poles.is_empty() {
            return Err(ContourError::Empty);
        }
        Ok(RationalFilter {
            poles,
            coeffs,
            scale,
        })
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Number of poles `q`, which is also the number of linear systems per application.
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, mu: C64) -> Result<C64, ContourError> {
        let tol = COLLISION_TOLERANCE * self.scale;
        let mut acc = C64::new(0.0, 0.0);
        for (k, (&p, &s)) in self.poles.iter().zip(&self.coeffs).enumerate() {
            let d = p - mu;
            if d.norm() <= tol {
                return Err(ContourError::PoleCollision { index: k, pole: p });
            }
            acc += s / d;
        }
        Ok(acc)
    }

    /// Pairing `k ↦ k′` with `φ_{k′} = conj(φ_k)` and `σ_{k′} = conj(σ_k)`, if every pole pairs.
    pub fn conjugate_pairs(&self) -> Option<Vec<usize>> {
        let tol = MERGE_TOLERANCE * self.scale;
        let ctol = MERGE_TOLERANCE * self.coeffs.iter().map(|s| s.norm()).fold(0.0, f64::max);
        let mut map = vec![usize::MAX; self.poles.len()];
        for (k, slot) in map.iter_mut().enumerate() {
            let target = self.poles[k].conj();
            let j = (0..self.poles.len())
                .filter(|&j| (self.poles[j] - target).norm() <= tol)
                .min_by(|&a, &b| {
                    (self.poles[a] - target)
                        .norm()
                        .total_cmp(&(self.poles[b] - target).norm())
                })?;
            if (self.coeffs[j] - self.coeffs[k].conj()).norm() > ctol {
                return None;
            }
            *slot = j;
        }
        Some(map)
    }

    /// CSV with header `k,re_pole,im_pole,re_sigma,im_sigma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,re_pole,im_pole,re_sigma,im_sigma\n");
        for (k, (p, s)) in self.poles.iter().zip(&self.coeffs).enumerate() {
            let _ = writeln!(
                out,
                "{k},{:.16e},{:.16e},{:.16e},{:.16e}",
                p.re, p.im, s.re, s.im
            );
        }
        out
    }
}

pub fn build_filter(contour: &Contour, rule: &QuadratureRule) -> RationalFilter {
    RationalFilter::build(contour, rule)
}

pub fn eval_filter(filter: &RationalFilter, mu: C64) -> Result<C64, ContourError> {
    filter.eval(mu)
}

/// Unmerged `(φ, σ)` terms: each segment contributes one term per node with
/// `σ = w·φ′/(2πi)`.
pub fn raw_terms(contour: &Contour, rule: &QuadratureRule) -> Vec<(C64, C64)> {
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    contour
        .segments()
        .iter()
        .flat_map(|seg| {
            rule.iter().map(move |(t, w)| {
                let (z, dz) = seg.node(t);
                (z, w * dz / two_pi_i)
            })
        })
        .collect()
}
