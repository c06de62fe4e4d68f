use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ContourError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    GaussLegendre,
    Trapezoidal,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::GaussLegendre => f.write_str("gauss"),
            RuleKind::Trapezoidal => f.write_str("trapezoid"),
        }
    }
}

impl FromStr for RuleKind {
    type Err = ContourError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "gauss-legendre" | "gl" => Ok(RuleKind::GaussLegendre),
            "trapezoid" | "trapezoidal" | "tr" => Ok(RuleKind::Trapezoidal),
            other => Err(ContourError::UnknownRule(other.to_string())),
        }
    }
}

/// Nodes and positive weights on `[-1, 1]`, nodes strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, k: usize) -> Result<Self, ContourError> {
        match kind {
            RuleKind::GaussLegendre => gauss_legendre(k),
            RuleKind::Trapezoidal => trapezoidal(k),
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}

/// Legendre polynomial `P_k(x)` and its derivative by the three-term recurrence.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule: Newton iteration on `P_K` from Chebyshev-like initial guesses.
pub fn gauss_legendre(k: usize) -> Result<QuadratureRule, ContourError> {
    if k == 0 {
        return Err(ContourError::TooFewNodes {
            kind: RuleKind::GaussLegendre,
            min: 1,
            got: 0,
        });
    }
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(k, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    Ok(QuadratureRule {
        kind: RuleKind::GaussLegendre,
        nodes,
        weights,
    })
}

/// Composite trapezoidal rule on `K` equispaced nodes including both endpoints.
pub fn trapezoidal(k: usize) -> Result<QuadratureRule, ContourError> {
    if k < 2 {
        return Err(ContourError::TooFewNodes {
            kind: RuleKind::Trapezoidal,
            min: 2,
            got: k,
        });
    }
    let h = 2.0 / (k - 1) as f64;
    let nodes = (0..k)
        .map(|i| if i == k - 1 { 1.0 } else { -1.0 + h * i as f64 })
        .collect();
    let weights = (0..k)
        .map(|i| if i == 0 || i == k - 1 { h / 2.0 } else { h })
        .collect();
    Ok(QuadratureRule {
        kind: RuleKind::Trapezoidal,
        nodes,
        weights,
    })
}
