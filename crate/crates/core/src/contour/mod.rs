//! Contours, quadrature rules and the rational filters built from them.

mod eta;
mod filter;
mod quadrature;
mod shape;

pub use eta::{default_radii, eta_curve, level_point, EtaCurve, DEFAULT_DELTA, LEVEL_CURVE_POINTS};
pub use filter::{
    build_filter, eval_filter, raw_terms, RationalFilter, COLLISION_TOLERANCE, MERGE_TOLERANCE,
};
pub use quadrature::{gauss_legendre, trapezoidal, QuadratureRule, RuleKind};
pub use shape::{
    winding_number, Contour, Location, Segment, BOUNDARY_TOLERANCE, CLOSURE_TOLERANCE,
    POLYLINE_POINTS,
};

use thiserror::Error;

use crate::linalg::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("{kind} rule needs at least {min} nodes, got {got}")]
    TooFewNodes {
        kind: RuleKind,
        min: usize,
        got: usize,
    },
    #[error("unknown quadrature rule '{0}'")]
    UnknownRule(String),
    #[error("ellipse needs positive finite radius and aspect (radius {radius}, aspect {aspect})")]
    InvalidEllipse { radius: f64, aspect: f64 },
    #[error("contour has no segments")]
    Empty,
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("segment {segment} does not connect to the next one (gap {gap:e})")]
    OpenChain { segment: usize, gap: f64 },
    #[error("contour is traversed clockwise")]
    Clockwise,
    #[error("evaluation point coincides with pole {index} at {pole}")]
    PoleCollision { index: usize, pole: C64 },
}
