use std::f64::consts::{FRAC_PI_2, PI};

use crate::linalg::C64;

use super::ContourError;

/// Points per segment used for winding numbers and area/diameter estimates.
pub const POLYLINE_POINTS: usize = 4096;

/// Relative distance (to the diameter) below which a point counts as on the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Relative gap allowed between consecutive segment endpoints.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// One smooth piece of a closed contour. Every segment is parameterized by a
/// quadrature variable `s ∈ [-1, 1]` traversed in the direction of the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// Half of the ellipse `c + R(cos θ + i·a·sin θ)` with `θ = π/2·(1 + t)`.
    /// The upper half uses `t = s`, the lower half `t = 2 − s` run backwards in
    /// `s` (so the pair of nodes `t` and `2 − t` share a quadrature weight).
    EllipseHalf {
        center: C64,
        radius: f64,
        aspect: f64,
        upper: bool,
    },
    /// Circular arc from angle `theta0` to `theta1` (counter-clockwise when `theta1 > theta0`).
    Arc {
        center: C64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Line {
        from: C64,
        to: C64,
    },
}

impl Segment {
    /// Point and derivative with respect to `s`, for `s ∈ [-1, 1]`.
    ///
    /// For the lower ellipse half the derivative is `φ′(t)` at `t = 2 − s`,
    /// which is the orientation-correct value when the pair `(t, 2 − t)` is
    /// integrated with the same weight over `t ∈ [-1, 1]`.
    pub fn node(&self, s: f64) -> (C64, C64) {
        match *self {
            Segment::EllipseHalf {
                center,
                radius,
                aspect,
                upper,
            } => {
                let t = if upper { s } else { 2.0 - s };
                let theta = FRAC_PI_2 * (1.0 + t);
                let (sn, cs) = theta.sin_cos();
                let z = center + radius * C64::new(cs, aspect * sn);
                let dz = radius * FRAC_PI_2 * C64::new(-sn, aspect * cs);
                (z, dz)
            }
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let half = 0.5 * (theta1 - theta0);
                let theta = theta0 + half * (s + 1.0);
                let e = C64::from_polar(radius, theta);
                (center + e, e * C64::new(0.0, half))
            }
            Segment::Line { from, to } => {
                let half = 0.5 * (to - from);
                (from + half * (s + 1.0), half)
            }
        }
    }

    /// Point at traversal fraction `f ∈ [0, 1]`.
    pub fn trace(&self, f: f64) -> C64 {
        match *self {
            Segment::EllipseHalf { upper: false, .. } => {
                // Traversal runs from t = 1 to t = 3.
                let t = 1.0 + 2.0 * f;
                let Segment::EllipseHalf {
                    center,
                    radius,
                    aspect,
                    ..
                } = *self
                else {
                    unreachable!()
                };
                let theta = FRAC_PI_2 * (1.0 + t);
                center + radius * C64::new(theta.cos(), aspect * theta.sin())
            }
            _ => self.node(2.0 * f - 1.0).0,
        }
    }

    pub fn start(&self) -> C64 {
        self.trace(0.0)
    }

    pub fn end(&self) -> C64 {
        self.trace(1.0)
    }

    /// Euclidean distance from `z` to the segment.
    pub fn distance(&self, z: C64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - from).norm();
                }
                let t = ((z - from) * d.conj()).re / len2;
                (z - (from + d * t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let w = z - center;
                let (lo, hi) = if theta1 >= theta0 {
                    (theta0, theta1)
                } else {
                    (theta1, theta0)
                };
                let mut ang = w.arg();
                // Bring the angle into [lo, lo + 2π).
                ang = lo + (ang - lo).rem_euclid(2.0 * PI);
                if w.norm() > 0.0 && ang <= hi {
                    (w.norm() - radius).abs()
                } else {
                    (z - self.start()).norm().min((z - self.end()).norm())
                }
            }
            Segment::EllipseHalf { .. } => {
                // Coarse polyline search refined by golden-section on the best bracket.
                let m = 512;
                let pts: Vec<C64> = (0..=m).map(|i| self.trace(i as f64 / m as f64)).collect();
                let best = (0..=m)
                    .min_by(|&a, &b| (pts[a] - z).norm().total_cmp(&(pts[b] - z).norm()))
                    .unwrap_or(0);
                let (mut a, mut b) = (
                    best.saturating_sub(1) as f64 / m as f64,
                    (best + 1).min(m) as f64 / m as f64,
                );
                let g = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..80 {
                    let x1 = b - g * (b - a);
                    let x2 = a + g * (b - a);
                    if (self.trace(x1) - z).norm() < (self.trace(x2) - z).norm() {
                        b = x2;
                    } else {
                        a = x1;
                    }
                }
                (self.trace(0.5 * (a + b)) - z).norm()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Inside,
    Outside,
    OnBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Ellipse {
        center: C64,
        radius: f64,
        aspect: f64,
    },
    Composite,
}

/// Closed, counter-clockwise, piecewise-smooth curve.
#[derive(Debug, Clone)]
pub struct Contour {
    segments: Vec<Segment>,
    shape: Shape,
    diameter: f64,
    closure_defect: f64,
    signed_area: f64,
    polyline: Vec<C64>,
}

impl Contour {
    /// Ellipse with horizontal semi-axis `radius` and vertical semi-axis `aspect·radius`.
    pub fn ellipse(center: C64, radius: f64, aspect: f64) -> Result<Self, ContourError> {
        if !(radius.is_finite() && radius > 0.0)
            || !(aspect.is_finite() && aspect > 0.0)
            || !center.is_finite()
        {
            return Err(ContourError::InvalidEllipse { radius, aspect });
        }
        let segments = vec![
            Segment::EllipseHalf {
                center,
                radius,
                aspect,
                upper: true,
            },
            Segment::EllipseHalf {
                center,
                radius,
                aspect,
                upper: false,
            },
        ];
        let polyline = polyline_of(&segments);
        Ok(Contour {
            segments,
            shape: Shape::Ellipse {
                center,
                radius,
                aspect,
            },
            diameter: 2.0 * radius * aspect.max(1.0),
            closure_defect: 0.0,
            signed_area: PI * radius * radius * aspect,
            polyline,
        })
    }

    pub fn circle(center: C64, radius: f64) -> Result<Self, ContourError> {
        Self::ellipse(center, radius, 1.0)
    }

    /// Glue segments into a closed contour. Consecutive endpoints (including
    /// last-to-first) must agree within `CLOSURE_TOLERANCE · diameter`, and the
    /// traversal must be counter-clockwise.
    pub fn composite(segments: Vec<Segment>) -> Result<Self, ContourError> {
        if segments.is_empty() {
            return Err(ContourError::Empty);
        }
        for s in &segments {
            let ok = match *s {
                Segment::Line { from, to } => from.is_finite() && to.is_finite() && from != to,
                Segment::Arc {
                    center,
                    radius,
                    theta0,
                    theta1,
                } => {
                    center.is_finite()
                        && radius.is_finite()
                        && radius > 0.0
                        && theta0.is_finite()
                        && theta1.is_finite()
                        && theta0 != theta1
                }
                Segment::EllipseHalf {
                    center,
                    radius,
                    aspect,
                    ..
                } => center.is_finite() && radius > 0.0 && aspect > 0.0,
            };
            if !ok {
                return Err(ContourError::DegenerateSegment);
            }
        }
        let polyline = polyline_of(&segments);
        let diameter = polyline_diameter(&polyline);
        if diameter == 0.0 {
            return Err(ContourError::DegenerateSegment);
        }
        let n = segments.len();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            let gap = (segments[i].end() - segments[(i + 1) % n].start()).norm();
            if gap > CLOSURE_TOLERANCE * diameter {
                return Err(ContourError::OpenChain { segment: i, gap });
            }
            defect = defect.max(gap);
        }
        let signed_area = polyline_area(&polyline);
        if signed_area <= 0.0 {
            return Err(ContourError::Clockwise);
        }
        Ok(Contour {
            segments,
            shape: Shape::Composite,
            diameter,
            closure_defect: defect,
            signed_area,
            polyline,
        })
    }

    /// Closed polygon through `vertices` in the given (counter-clockwise) order.
    pub fn polygon(vertices: &[C64]) -> Result<Self, ContourError> {
        let n = vertices.len();
        if n < 3 {
            return Err(ContourError::Empty);
        }
        let segs = (0..n)
            .map(|i| Segment::Line {
                from: vertices[i],
                to: vertices[(i + 1) % n],
            })
            .collect();
        Self::composite(segs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_ellipse(&self) -> bool {
        matches!(self.shape, Shape::Ellipse { .. })
    }

    /// `(center, radius, aspect)` for ellipses.
    pub fn ellipse_params(&self) -> Option<(C64, f64, f64)> {
        match self.shape {
            Shape::Ellipse {
                center,
                radius,
                aspect,
            } => Some((center, radius, aspect)),
            Shape::Composite => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn closure_defect(&self) -> f64 {
        self.closure_defect
    }

    /// Enclosed area from the polyline; positive for counter-clockwise traversal.
    pub fn signed_area(&self) -> f64 {
        self.signed_area
    }

    /// Boundary samples, `POLYLINE_POINTS` per segment, without repeating the first point.
    pub fn polyline(&self) -> &[C64] {
        &self.polyline
    }

    pub fn boundary_distance(&self, z: C64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn locate(&self, z: C64) -> Location {
        if !z.is_finite() {
            return Location::Outside;
        }
        let tol = BOUNDARY_TOLERANCE * self.diameter;
        match self.shape {
            Shape::Ellipse {
                center,
                radius,
                aspect,
            } => {
                let w = (z - center) / radius;
                let v = w.re * w.re + (w.im / aspect) * (w.im / aspect);
                // |√v − 1| scaled to physical units bounds the distance from below.
                let near = (v.sqrt() - 1.0).abs() * radius * aspect.min(1.0) <= tol;
                if near && self.boundary_distance(z) <= tol {
                    Location::OnBoundary
                } else if v < 1.0 {
                    Location::Inside
                } else {
                    Location::Outside
                }
            }
            Shape::Composite => {
                if self.boundary_distance(z) <= tol {
                    return Location::OnBoundary;
                }
                if winding_number(&self.polyline, z) == 1 {
                    Location::Inside
                } else {
                    Location::Outside
                }
            }
        }
    }

    /// Strictly inside; boundary points count as outside.
    pub fn inside(&self, z: C64) -> bool {
        self.locate(z) == Location::Inside
    }
}

fn polyline_of(segments: &[Segment]) -> Vec<C64> {
    let mut pts = Vec::with_capacity(segments.len() * POLYLINE_POINTS);
    for s in segments {
        for i in 0..POLYLINE_POINTS {
            pts.push(s.trace(i as f64 / POLYLINE_POINTS as f64));
        }
    }
    pts
}

fn polyline_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
}

fn polyline_diameter(pts: &[C64]) -> f64 {
    // A subsample is enough: the diameter is only used as a length scale.
    let step = (pts.len() / 512).max(1);
    let sub: Vec<C64> = pts.iter().step_by(step).copied().collect();
    let mut d: f64 = 0.0;
    for (i, a) in sub.iter().enumerate() {
        for b in &sub[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Winding number of a closed polyline around `z` by summed turning angles.
pub fn winding_number(pts: &[C64], z: C64) -> i64 {
    let n = pts.len();
    let total: f64 = (0..n)
        .map(|i| ((pts[(i + 1) % n] - z) / (pts[i] - z)).arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}
