use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contour::{Contour, Segment};
use crate::linalg::C64;

use super::IoError;

/// One entry of a contour file. Points are `[re, im]`; angles are in radians.
///
/// ```json
/// [{"type": "arc", "center": [0, 0], "radius": 1, "theta0": 0, "theta1": 3.141592653589793},
///  {"type": "line", "from": [-1, 0], "to": [1, 0]}]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentSpec {
    Arc {
        center: [f64; 2],
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
}

fn point(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl From<SegmentSpec> for Segment {
    fn from(s: SegmentSpec) -> Self {
        match s {
            SegmentSpec::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => Segment::Arc {
                center: point(center),
                radius,
                theta0,
                theta1,
            },
            SegmentSpec::Line { from, to } => Segment::Line {
                from: point(from),
                to: point(to),
            },
        }
    }
}

/// Build a composite contour from a JSON list of segments. The chain must
/// close and run counter-clockwise.
pub fn contour_from_json(text: &str) -> Result<Contour, IoError> {
    let specs: Vec<SegmentSpec> =
        serde_json::from_str(text).map_err(|e| IoError::ContourFile(e.to_string()))?;
    Ok(Contour::composite(
        specs.into_iter().map(Segment::from).collect(),
    )?)
}

pub fn read_contour_file(path: impl AsRef<Path>) -> Result<Contour, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    contour_from_json(&text)
}

pub fn contour_to_json(specs: &[SegmentSpec]) -> String {
    serde_json::to_string_pretty(specs).expect("segments serialize")
}
