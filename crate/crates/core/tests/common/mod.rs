#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::PathBuf;

use nhfeast::contour::{build_filter, gauss_legendre, Contour};
use nhfeast::feast::{filter_gap, FeastResult};
use nhfeast::linalg::{qr_orthonormalize, ComplexDense};
use nhfeast::C64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A disk with `m` eigenvalues inside (radius at most `inner · R`) and the
/// rest in the annulus `[outer.0, outer.1] · R`.
#[derive(Debug, Clone)]
pub struct DiskProblem {
    pub center: C64,
    pub radius: f64,
    pub lambdas: Vec<C64>,
    pub m: usize,
}

impl DiskProblem {
    pub fn random(rng: &mut impl Rng, n: usize, m: usize, inner: f64, outer: (f64, f64)) -> Self {
        let center = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let radius = rng.random_range(0.2..1.5);
        let mut lambdas = Vec::with_capacity(n);
        for j in 0..n {
            let r = if j < m {
                inner * rng.random::<f64>().sqrt()
            } else {
                rng.random_range(outer.0..outer.1)
            };
            lambdas.push(center + C64::from_polar(radius * r, rng.random_range(0.0..TAU)));
        }
        DiskProblem {
            center,
            radius,
            lambdas,
            m,
        }
    }

    pub fn contour(&self) -> Contour {
        Contour::circle(self.center, self.radius).expect("positive radius")
    }

    /// `ε` for Gauss-Legendre with 8 nodes and subspace `p`.
    pub fn epsilon_gl8(&self, p: usize) -> (f64, usize) {
        let k = self.contour();
        let g = filter_gap(
            &build_filter(&k, &gauss_legendre(8).unwrap()),
            &self.lambdas,
            &k,
            p,
        )
        .unwrap();
        (g.epsilon.unwrap(), g.m_prime)
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `(iteration, log10 max residual)` for iterations at or after `from` whose
/// residual is above `floor`.
pub fn residual_points(r: &FeastResult, from: usize, floor: f64) -> Vec<(f64, f64)> {
    r.history
        .iter()
        .filter(|h| h.iter >= from)
        .filter_map(|h| {
            h.max_residual
                .filter(|&x| x > floor)
                .map(|x| (h.iter as f64, x.log10()))
        })
        .collect()
}

/// First iteration whose max residual is at most `target`.
pub fn first_reach(r: &FeastResult, target: f64) -> Option<usize> {
    r.history
        .iter()
        .find(|h| h.max_residual.is_some_and(|x| x <= target))
        .map(|h| h.iter)
}

/// Upper bound on the sine of the largest principal angle between the
/// column spans of `a` and `b` (same rank): `‖(I − Q_a Q_aᴴ) Q_b‖_F`.
pub fn max_angle_sine(a: &ComplexDense, b: &ComplexDense) -> f64 {
    let (qa, _) = qr_orthonormalize(a);
    let (qb, _) = qr_orthonormalize(b);
    let proj = qa.matmul(&qa.adjoint_matmul(&qb).unwrap()).unwrap();
    qb.sub(&proj).unwrap().norm_fro()
}

/// Greedy nearest matching; returns the largest distance, or `None` when the
/// sets differ in size.
pub fn match_sets(found: &[C64], expected: &[C64]) -> Option<f64> {
    if found.len() != expected.len() {
        return None;
    }
    let mut left: Vec<C64> = found.to_vec();
    let mut worst = 0.0f64;
    for e in expected {
        let (i, d) = left
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        worst = worst.max(d);
        left.swap_remove(i);
    }
    Some(worst)
}

/// Matrix file from `NHFEAST_DATA_DIR` or the workspace `data/` directory.
pub fn data_file(name: &str) -> Option<PathBuf> {
    let mut dirs: Vec<PathBuf> = Vec::new();
    if let Some(d) = std::env::var_os("NHFEAST_DATA_DIR") {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    dirs.into_iter().map(|d| d.join(name)).find(|p| p.is_file())
}
