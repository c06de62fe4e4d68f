//! Browser demo: filter landscape, `η` curve, and an R/Bi convergence race on
//! a synthetic pencil, all for ellipses centred at the origin with radius 1.

use std::f64::consts::TAU;

use nhfeast::contour::{
    build_filter, default_radii, eta_curve, Contour, QuadratureRule, DEFAULT_DELTA,
};
use nhfeast::feast::{make_synthetic, solve, FeastConfig, Variant};
use nhfeast::C64;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest pencil the demo will build; dense work grows as `n³`.
pub const MAX_DEMO_SIZE: usize = 200;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

fn reference(aspect: f64) -> Result<Contour, String> {
    Contour::ellipse(C64::new(0.0, 0.0), 1.0, aspect).map_err(|e| e.to_string())
}

fn rule(kind: &str, nodes: usize) -> Result<QuadratureRule, String> {
    let kind = kind
        .parse()
        .map_err(|e: nhfeast::contour::ContourError| e.to_string())?;
    QuadratureRule::new(kind, nodes).map_err(|e| e.to_string())
}

/// `log10 |ρ(z)|` on a `size × size` grid over `[-extent, extent]²`, row-major
/// from the top-left; `NaN` where `z` sits on a pole.
pub fn filter_field(
    kind: &str,
    nodes: usize,
    aspect: f64,
    size: usize,
    extent: f64,
) -> Result<Vec<f64>, String> {
    if size < 2 || !(extent.is_finite() && extent > 0.0) {
        return Err("grid needs size >= 2 and a positive extent".into());
    }
    let filter = build_filter(&reference(aspect)?, &rule(kind, nodes)?);
    let step = 2.0 * extent / (size - 1) as f64;
    let mut out = Vec::with_capacity(size * size);
    for row in 0..size {
        let im = extent - row as f64 * step;
        for col in 0..size {
            let z = C64::new(-extent + col as f64 * step, im);
            out.push(filter.eval(z).map_or(f64::NAN, |v| v.norm().log10()));
        }
    }
    Ok(out)
}

/// Filter poles as interleaved `[re₀, im₀, re₁, im₁, …]`.
pub fn filter_poles(kind: &str, nodes: usize, aspect: f64) -> Result<Vec<f64>, String> {
    let filter = build_filter(&reference(aspect)?, &rule(kind, nodes)?);
    Ok(filter.poles().iter().flat_map(|p| [p.re, p.im]).collect())
}

/// `{"radii": [...], "eta": [...]}` for the scaled ellipse family.
pub fn eta_json(kind: &str, nodes: usize, aspect: f64) -> Result<String, String> {
    let curve = eta_curve(
        &rule(kind, nodes)?,
        aspect,
        &default_radii(DEFAULT_DELTA),
        DEFAULT_DELTA,
    )
    .map_err(|e| e.to_string())?;
    Ok(json!({"radii": curve.radii, "eta": curve.values}).to_string())
}

/// Offset of the second inside eigenvalue from the first. The conditioning
/// scale acts on the closest pair, so keeping that pair this tight keeps
/// `‖A‖` moderate even at `s = 1e11`.
pub const CLUSTER_GAP: f64 = 1e-9;

/// `m` eigenvalues spread over the disk of radius 0.8 and `n − m` over the
/// annulus `[1.1, 3]`, both on golden-angle spirals so the layout is fixed.
/// For `m ≥ 2` the second eigenvalue sits `CLUSTER_GAP` from the first.
pub fn demo_spectrum(n: usize, m: usize) -> Vec<C64> {
    let mut out: Vec<C64> = (0..n)
        .map(|j| {
            let theta = j as f64 * GOLDEN_ANGLE;
            let r = if j < m {
                0.8 * ((j as f64 + 0.5) / m as f64).sqrt()
            } else {
                let t = ((j - m) as f64 * 0.618_033_988_749_895).fract();
                1.1 + 1.9 * t
            };
            C64::from_polar(r, theta % TAU)
        })
        .collect();
    if m >= 2 {
        out[1] = out[0] + CLUSTER_GAP;
    }
    out
}

/// Run R-FEAST and Bi-FEAST on the same synthetic pencil with Gauss 8 on the
/// unit circle and report both residual histories.
pub fn race_json(
    n: usize,
    m: usize,
    subspace: usize,
    conditioning: f64,
    seed: u64,
) -> Result<String, String> {
    if n == 0 || n > MAX_DEMO_SIZE {
        return Err(format!("size must be in 1..={MAX_DEMO_SIZE}"));
    }
    if m > n || subspace == 0 || subspace > n {
        return Err("need m <= n and 1 <= subspace <= n".into());
    }
    let lambdas = demo_spectrum(n, m);
    // A random unitary basis makes rounding generic, which is what exposes
    // Bi-FEAST's sensitivity to ill-conditioned eigenvectors.
    let sp = make_synthetic(&lambdas, conditioning, seed)
        .map_err(|e| e.to_string())?
        .unitary_similarity(seed.wrapping_add(1));
    let pencil = sp.pencil();
    let mut base = FeastConfig::new(reference(1.0)?, rule("gauss", 8)?, subspace)
        .with_seed(seed)
        .with_max_iter(25);
    // Race on residuals alone so both curves run to the residual tolerance.
    base.tol_trace = f64::MIN_POSITIVE;
    let mut runs = serde_json::Map::new();
    for variant in [Variant::R, Variant::Bi] {
        let r = solve(&pencil, &base.clone().with_variant(variant)).map_err(|e| e.to_string())?;
        let history: Vec<Option<f64>> = r.history.iter().map(|h| h.res_log10()).collect();
        let found: Vec<[f64; 2]> = r
            .candidate_indices()
            .iter()
            .map(|&i| [r.eigenvalues[i].re, r.eigenvalues[i].im])
            .collect();
        runs.insert(
            variant.to_string(),
            json!({"history": history, "candidates": found, "termination": r.termination.to_string()}),
        );
    }
    let exact: Vec<[f64; 2]> = lambdas.iter().map(|z| [z.re, z.im]).collect();
    Ok(json!({"lambdas": exact, "runs": runs}).to_string())
}

#[wasm_bindgen(js_name = filterField)]
pub fn filter_field_js(
    kind: &str,
    nodes: usize,
    aspect: f64,
    size: usize,
    extent: f64,
) -> Result<Vec<f64>, JsError> {
    filter_field(kind, nodes, aspect, size, extent).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = filterPoles)]
pub fn filter_poles_js(kind: &str, nodes: usize, aspect: f64) -> Result<Vec<f64>, JsError> {
    filter_poles(kind, nodes, aspect).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = etaCurve)]
pub fn eta_json_js(kind: &str, nodes: usize, aspect: f64) -> Result<String, JsError> {
    eta_json(kind, nodes, aspect).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = race)]
pub fn race_json_js(
    n: usize,
    m: usize,
    subspace: usize,
    conditioning: f64,
    seed: u64,
) -> Result<String, JsError> {
    race_json(n, m, subspace, conditioning, seed).map_err(|e| JsError::new(&e))
}
