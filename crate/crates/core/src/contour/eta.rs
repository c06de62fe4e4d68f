use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::linalg::C64;

use super::filter::RationalFilter;
use super::quadrature::QuadratureRule;
use super::shape::Contour;
use super::ContourError;

pub const DEFAULT_DELTA: f64 = 0.01;

/// Samples per level curve.
pub const LEVEL_CURVE_POINTS: usize = 1024;

/// `η(r)`: the smallest `|ρ_ref|` on the level curve of radius `r ≤ 1 − δ`,
/// and the largest for `r ≥ 1 + δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCurve {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub delta: f64,
}

impl EtaCurve {
    /// CSV with header `r,eta`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,eta\n");
        for (r, e) in self.radii.iter().zip(&self.values) {
            let _ = writeln!(out, "{r:.16e},{e:.16e}");
        }
        out
    }
}

/// Linear grid on `[0, 1 − δ]` followed by a logarithmic grid on `[1 + δ, 4]`,
/// which resolves the steep decay just outside the contour.
pub fn default_radii(delta: f64) -> Vec<f64> {
    let inner = 100;
    let outer = 200;
    let mut r: Vec<f64> = (0..=inner)
        .map(|i| (1.0 - delta) * i as f64 / inner as f64)
        .collect();
    let (lo, hi) = ((1.0 + delta).ln(), 4f64.ln());
    r.extend((0..outer).map(|i| (lo + (hi - lo) * i as f64 / outer as f64).exp()));
    r.push(4.0);
    r
}

/// Point on the level curve of radius `r` of the reference ellipse with aspect `a`.
pub fn level_point(r: f64, aspect: f64, t: f64) -> C64 {
    let theta = FRAC_PI_2 * (1.0 + t);
    r * C64::new(theta.cos(), aspect * theta.sin())
}

/// Evaluate `η` on `radii` for the reference ellipse (center 0, radius 1).
/// Radii inside the excluded band `(1 − δ, 1 + δ)` are skipped, and the
/// retained radii are sorted ascending.
pub fn eta_curve(
    rule: &QuadratureRule,
    aspect: f64,
    radii: &[f64],
    delta: f64,
) -> Result<EtaCurve, ContourError> {
    let reference = Contour::ellipse(C64::new(0.0, 0.0), 1.0, aspect)?;
    let filter = RationalFilter::build(&reference, rule);
    let mut rs: Vec<f64> = radii
        .iter()
        .copied()
        .filter(|&r| r.is_finite() && r >= 0.0 && (r <= 1.0 - delta || r >= 1.0 + delta))
        .collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let mut values = Vec::with_capacity(rs.len());
    for &r in &rs {
        let samples = (0..LEVEL_CURVE_POINTS).map(|i| {
            let t = -1.0 + 4.0 * i as f64 / LEVEL_CURVE_POINTS as f64;
            filter.eval(level_point(r, aspect, t)).map(|z| z.norm())
        });
        let mut v = if r < 1.0 { f64::INFINITY } else { 0.0 };
        for s in samples {
            let s = s?;
            v = if r < 1.0 { v.min(s) } else { v.max(s) };
        }
        values.push(v);
    }
    Ok(EtaCurve {
        radii: rs,
        values,
        delta,
    })
}
