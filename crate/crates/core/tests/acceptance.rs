//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion whose inputs are missing from the environment (matrix files,
//! hardware threads) is reported as `FAIL (blocked: ...)`. Blocked failures
//! do not change the exit status unless `NHFEAST_ACCEPTANCE_STRICT` is set;
//! any other failure does.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use common::{
    c, data_file, first_reach, fit_slope, match_sets, max_angle_sine, residual_points, DiskProblem,
};
use nhfeast::contour::{build_filter, gauss_legendre, trapezoidal, Contour, Segment};
use nhfeast::feast::{
    filter_gap, make_synthetic, solve, FeastConfig, FeastResult, Operator, Pencil, Variant,
};
use nhfeast::io::parse_matrix_market;
use nhfeast::linalg::{dense_eig, ComplexDense, ComplexSparse};
use nhfeast::projector::{ProjectorEngine, ProjectorOptions};
use nhfeast::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    blocked: Option<String>,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            blocked: None,
            detail,
        }
    }

    fn blocked(reason: String, detail: String) -> Self {
        Outcome {
            pass: false,
            blocked: Some(reason),
            detail,
        }
    }
}

/// Iterate without early stopping: both stopping tolerances are made unreachable.
fn fixed_iterations(mut cfg: FeastConfig, iters: usize) -> FeastConfig {
    cfg.tol_residual = f64::MIN_POSITIVE;
    cfg.tol_trace = f64::MIN_POSITIVE;
    cfg.max_iter = iters;
    cfg
}

fn log_res(r: &FeastResult, iter: usize) -> Option<f64> {
    r.history.get(iter - 1).and_then(|h| h.res_log10())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}"))
        .unwrap_or_else(|| "none".into())
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    const TOL: f64 = 1e-13;
    const SAMPLES: usize = 1000;
    const BUDGET_S: f64 = 1.0;
    let start = Instant::now();
    let filter = build_filter(
        &Contour::circle(c(0.0, 0.0), 1.0).unwrap(),
        &trapezoidal(3).unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < SAMPLES {
        let r = rng.random_range(0.0..=3.0);
        if (0.99..=1.01).contains(&r) {
            continue;
        }
        let mu = C64::from_polar(r, rng.random_range(0.0..TAU));
        let exact = C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - mu.powu(4));
        worst = worst.max((filter.eval(mu).unwrap() - exact).norm());
        taken += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst <= TOL && secs < BUDGET_S,
        format!("max |rho - 1/(1-mu^4)| = {worst:.2e} over {SAMPLES} points (tol {TOL:e}); {secs:.3} s (budget {BUDGET_S} s)"),
    )
}

// ---------------------------------------------------------------------------

fn load_standard(name: &str) -> Result<Pencil, String> {
    let path = data_file(name)
        .ok_or_else(|| format!("{name} not found (set NHFEAST_DATA_DIR or place it in data/)"))?;
    let a = parse_matrix_market(&path).map_err(|e| e.to_string())?;
    Pencil::standard(Operator::Sparse(a)).map_err(|e| e.to_string())
}

fn criterion_2() -> Outcome {
    const RES4: f64 = -5.3;
    const RES14: f64 = -14.6;
    const POINT_TOL: f64 = 0.5;
    const R_SLOPE: f64 = -0.9;
    const R_SLOPE_TOL: f64 = 0.3;
    const BI_SLOPE: f64 = -1.9;
    const BI_SLOPE_TOL: f64 = 0.4;
    const TRACE_FLOOR: f64 = -14.0;
    const BUDGET_S: f64 = 60.0;
    let pencil = match load_standard("qc324.mtx") {
        Ok(p) => p,
        Err(e) => {
            return Outcome::blocked(
                e,
                "R-FEAST/Bi-FEAST on disk(-0.5, 0.01), p=8, GL K=8 not run".into(),
            )
        }
    };
    let start = Instant::now();
    let k = Contour::circle(c(-0.5, 0.0), 0.01).unwrap();
    let base = fixed_iterations(FeastConfig::new(k, gauss_legendre(8).unwrap(), 8), 14);
    let r = match solve(&pencil, &base) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("R-FEAST failed: {e}")),
    };
    let bi = match solve(&pencil, &base.clone().with_variant(Variant::Bi)) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("Bi-FEAST failed: {e}")),
    };
    let secs = start.elapsed().as_secs_f64();
    let (r4, r14) = (log_res(&r, 4), log_res(&r, 14));
    let pts: Vec<(f64, f64)> = (4..=13)
        .filter_map(|i| log_res(&r, i).map(|v| (i as f64, v)))
        .collect();
    let r_slope = (pts.len() >= 2).then(|| fit_slope(&pts));
    let mut trace_pts = Vec::new();
    for w in bi.history.windows(2) {
        let d = (w[1].trace - w[0].trace).norm().log10();
        if d <= TRACE_FLOOR {
            break;
        }
        trace_pts.push((w[1].iter as f64, d));
    }
    let bi_slope = (trace_pts.len() >= 2).then(|| fit_slope(&trace_pts));
    let cands = r.candidate_indices().len();
    let near = |v: Option<f64>, x: f64, tol: f64| v.is_some_and(|v| (v - x).abs() <= tol);
    let pass = near(r4, RES4, POINT_TOL)
        && near(r14, RES14, POINT_TOL)
        && near(r_slope, R_SLOPE, R_SLOPE_TOL)
        && cands == 8
        && near(bi_slope, BI_SLOPE, BI_SLOPE_TOL)
        && secs < BUDGET_S;
    Outcome::new(
        pass,
        format!(
            "R: res(4)={} res(14)={} (targets {RES4}, {RES14} +/- {POINT_TOL}), slope {} (target {R_SLOPE} +/- {R_SLOPE_TOL}), {cands} candidates; Bi trace slope {} (target {BI_SLOPE} +/- {BI_SLOPE_TOL}); {secs:.1} s (budget {BUDGET_S} s)",
            fmt_opt(r4),
            fmt_opt(r14),
            fmt_opt(r_slope),
            fmt_opt(bi_slope)
        ),
    )
}

fn criterion_3() -> Outcome {
    const TARGET: f64 = -0.93;
    const TOL: f64 = 0.05;
    let pencil = match load_standard("qc324.mtx") {
        Ok(p) => p,
        Err(e) => {
            return Outcome::blocked(
                e,
                "filter gap on disk(-0.5, 0.01), p=8, GL K=8 not computed".into(),
            )
        }
    };
    let a = pencil.a().to_dense();
    let lambdas = match dense_eig(&a, &ComplexDense::identity(pencil.n()), false) {
        Ok(e) => e.eigenvalues,
        Err(e) => return Outcome::new(false, format!("full dense solve failed: {e}")),
    };
    let k = Contour::circle(c(-0.5, 0.0), 0.01).unwrap();
    let report = filter_gap(
        &build_filter(&k, &gauss_legendre(8).unwrap()),
        &lambdas,
        &k,
        8,
    )
    .unwrap();
    let gap = report.log10_gap;
    Outcome::new(
        gap.is_some_and(|g| (g - TARGET).abs() <= TOL),
        format!(
            "m = {}, log10 gap = {} (target {TARGET} +/- {TOL})",
            report.m,
            fmt_opt(gap)
        ),
    )
}

// ---------------------------------------------------------------------------

struct RuleRun {
    label: &'static str,
    p: usize,
    result: FeastResult,
    epsilon: f64,
}

fn gl_tr_runs(
    pencil: &Pencil,
    k: &Contour,
    lambdas: Option<&[C64]>,
    iters: usize,
) -> Result<Vec<RuleRun>, String> {
    let mut runs = Vec::new();
    for p in [31, 34] {
        for (label, rule) in [
            ("GL8", gauss_legendre(8).unwrap()),
            ("TR9", trapezoidal(9).unwrap()),
        ] {
            let epsilon = match lambdas {
                Some(l) => filter_gap(&build_filter(k, &rule), l, k, p)
                    .map_err(|e| e.to_string())?
                    .epsilon
                    .unwrap_or(f64::NAN),
                None => f64::NAN,
            };
            let cfg = fixed_iterations(FeastConfig::new(k.clone(), rule, p).with_seed(3), iters);
            let result = solve(pencil, &cfg).map_err(|e| format!("{label} p={p}: {e}"))?;
            runs.push(RuleRun {
                label,
                p,
                result,
                epsilon,
            });
        }
    }
    Ok(runs)
}

fn find<'a>(runs: &'a [RuleRun], label: &str, p: usize) -> &'a RuleRun {
    runs.iter()
        .find(|r| r.label == label && r.p == p)
        .expect("run present")
}

/// Spectrum with 28 eigenvalues inside disk(-0.17, 0.02) whose outside part
/// reverses the GL/TR ordering between p = 31 and p = 34: three eigenvalues
/// just outside the circle, three near the real axis (where Gauss-Legendre
/// damps hardest) and the rest near the imaginary direction (where the
/// trapezoidal rule damps harder).
fn gl_tr_synthetic() -> (Vec<C64>, Contour) {
    let center = c(-0.17, 0.0);
    let radius = 0.02;
    let at = |r: f64, deg: f64| center + C64::from_polar(radius * r, deg.to_radians());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut lam = Vec::new();
    for _ in 0..28 {
        lam.push(at(
            0.8 * rng.random::<f64>().sqrt(),
            rng.random_range(0.0..360.0),
        ));
    }
    for d in [80.0, 95.0, 265.0] {
        lam.push(at(1.05, d));
    }
    for d in [2.0, 178.0, 183.0] {
        lam.push(at(1.2, d));
    }
    for _ in 0..40 {
        let side = if rng.random::<bool>() { 90.0 } else { 270.0 };
        lam.push(at(
            rng.random_range(1.45..4.0),
            side + rng.random_range(-15.0..15.0),
        ));
    }
    (lam, Contour::circle(center, radius).unwrap())
}

fn criterion_4() -> Outcome {
    const TARGET: f64 = 1e-13;
    const BUDGET_S: f64 = 900.0;
    let start = Instant::now();
    if let Ok(pencil) = load_standard("qc2534.mtx") {
        let k = Contour::circle(c(-0.17, 0.0), 0.02).unwrap();
        let runs = match gl_tr_runs(&pencil, &k, None, 9) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, e),
        };
        let secs = start.elapsed().as_secs_f64();
        let tr34 = first_reach(&find(&runs, "TR9", 34).result, TARGET);
        let gl34 = first_reach(&find(&runs, "GL8", 34).result, TARGET);
        // -14.1 reached within 0.3 log10.
        let gl31 = first_reach(&find(&runs, "GL8", 31).result, 10f64.powf(-13.8));
        let pass = tr34.is_some_and(|t| t <= 7)
            && gl34.is_some_and(|g| (7..=9).contains(&g) && tr34.is_some_and(|t| t < g))
            && gl31.is_some_and(|g| (7..=9).contains(&g))
            && runs
                .iter()
                .all(|r| r.result.candidate_indices().len() == 28)
            && secs < BUDGET_S;
        return Outcome::new(
            pass,
            format!("QC2534: first iteration <= 1e-13: TR9 p=34 {tr34:?} (<= 7), GL8 p=34 {gl34:?} (8 +/- 1); GL8 p=31 reaches -14.1 at {gl31:?} (8 +/- 1); {secs:.1} s (budget {BUDGET_S} s)"),
        );
    }
    let (lam, k) = gl_tr_synthetic();
    let sp = make_synthetic(&lam, 1.0, 5).unwrap();
    let runs = match gl_tr_runs(&sp.pencil(), &k, Some(&lam), 10) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let secs = start.elapsed().as_secs_f64();
    let slope = |r: &RuleRun| fit_slope(&residual_points(&r.result, 2, 1e-12));
    let reach = |r: &RuleRun| first_reach(&r.result, TARGET).unwrap_or(usize::MAX);
    let (g31, t31, g34, t34) = (
        find(&runs, "GL8", 31),
        find(&runs, "TR9", 31),
        find(&runs, "GL8", 34),
        find(&runs, "TR9", 34),
    );
    let pass = g31.epsilon < t31.epsilon
        && t34.epsilon < g34.epsilon
        && slope(g31) < slope(t31)
        && slope(t34) < slope(g34)
        && reach(g31) < reach(t31)
        && reach(t34) < reach(g34)
        && runs
            .iter()
            .all(|r| r.result.candidate_indices().len() == 28)
        && secs < BUDGET_S;
    let describe = |r: &RuleRun| {
        format!(
            "{} p={}: log10 eps {:.2}, slope {:.2}, 1e-13 at {}",
            r.label,
            r.p,
            r.epsilon.log10(),
            slope(r),
            first_reach(&r.result, TARGET).map_or("never".into(), |i| i.to_string())
        )
    };
    Outcome::new(
        pass,
        format!(
            "QC2534 unavailable, synthetic fallback with m=28 in disk(-0.17, 0.02): {}; {}; {}; {}; {secs:.1} s",
            describe(g31),
            describe(t31),
            describe(g34),
            describe(t34)
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    const TRIALS: usize = 100;
    const TOL: f64 = 1e-8;
    const BUDGET_S: f64 = 30.0;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for trial in 0..TRIALS {
        let n = rng.random_range(6..=30);
        let m = rng.random_range(1..=4);
        let prob = DiskProblem::random(&mut rng, n, m, 0.85, (1.1, 4.0));
        let sp = make_synthetic(&prob.lambdas, 1.0, rng.random()).unwrap();
        let k = prob.contour();
        let p = (m + rng.random_range(1..=3)).min(n);
        let cfg =
            FeastConfig::new(k.clone(), gauss_legendre(8).unwrap(), p).with_seed(rng.random());
        let expected: Vec<C64> = dense_eig(&sp.a, &sp.b, false)
            .unwrap()
            .eigenvalues
            .into_iter()
            .filter(|z| k.inside(*z))
            .collect();
        match solve(&sp.pencil(), &cfg) {
            Ok(r) => match match_sets(&r.candidate_eigenvalues(), &expected) {
                Some(d) if d <= TOL => worst = worst.max(d),
                Some(d) => failures.push(format!("trial {trial}: error {d:.1e}")),
                None => failures.push(format!(
                    "trial {trial}: {} candidates vs {} inside",
                    r.candidate_indices().len(),
                    expected.len()
                )),
            },
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        failures.is_empty() && secs < BUDGET_S,
        format!(
            "{}/{TRIALS} pencils matched, worst eigenvalue error {worst:.1e} (tol {TOL:e}){}; {secs:.2} s (budget {BUDGET_S} s)",
            TRIALS - failures.len(),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
        ),
    )
}

fn criterion_6() -> Outcome {
    const TRIALS: usize = 100;
    const REQUIRED: usize = 90;
    const SLOPE_TOL: f64 = 0.4;
    const EPS_RANGE: (f64, f64) = (0.01, 0.3);
    const FLOOR: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut ok, mut tried, mut rejected) = (0, 0, 0);
    let mut misses = Vec::new();
    while tried < TRIALS {
        let n = rng.random_range(12..=30);
        let m = rng.random_range(1..=4);
        let prob = DiskProblem::random(&mut rng, n, m, 0.85, (1.05, 4.0));
        let p = m + rng.random_range(0..=3);
        let (eps, _) = prob.epsilon_gl8(p);
        if !(EPS_RANGE.0..=EPS_RANGE.1).contains(&eps) {
            rejected += 1;
            continue;
        }
        tried += 1;
        let sp = make_synthetic(&prob.lambdas, 1.0, rng.random()).unwrap();
        let cfg = fixed_iterations(
            FeastConfig::new(prob.contour(), gauss_legendre(8).unwrap(), p).with_seed(rng.random()),
            60,
        );
        let Ok(r) = solve(&sp.pencil(), &cfg) else {
            misses.push(format!("eps {eps:.3}: solver error"));
            continue;
        };
        let pts = residual_points(&r, 2, FLOOR);
        if pts.len() < 2 {
            misses.push(format!("eps {eps:.3}: {} points above floor", pts.len()));
            continue;
        }
        let slope = fit_slope(&pts);
        if (slope - eps.log10()).abs() <= SLOPE_TOL {
            ok += 1;
        } else {
            misses.push(format!("log10 eps {:.2} vs slope {slope:.2}", eps.log10()));
        }
    }
    Outcome::new(
        ok >= REQUIRED,
        format!(
            "{ok}/{TRIALS} slopes within log10(eps) +/- {SLOPE_TOL} (need {REQUIRED}); eps in [{}, {}], {rejected} draws rejected outside the range{}",
            EPS_RANGE.0,
            EPS_RANGE.1,
            if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join(", ")) }
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    const S: f64 = 1e11;
    const R_TARGET: f64 = 1e-12;
    // Stall level 1e-8 with the stated one-order-of-magnitude tolerance.
    const BI_STALL: f64 = 1e-9;
    // Agreement of 5 to 6 digits, +/- one digit.
    const DIGITS: (f64, f64) = (4.0, 7.0);
    const ITERS: usize = 15;
    let ill = c(0.3, 0.1);
    let mut lam = vec![ill, ill + c(1e-9, 0.0), c(-0.4, 0.2), c(0.1, -0.5)];
    for j in 0..16 {
        let t = j as f64;
        lam.push(c(1.5 + 0.3 * t, 0.7 * t.sin()));
    }
    let k = Contour::circle(c(0.0, 0.0), 1.0).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in 0..4u64 {
        // Generic rounding: the same pencil in a random orthonormal basis.
        let sp = make_synthetic(&lam, S, seed)
            .unwrap()
            .unitary_similarity(seed + 100);
        let cfg = fixed_iterations(
            FeastConfig::new(k.clone(), gauss_legendre(8).unwrap(), 6).with_seed(seed),
            ITERS,
        );
        let (r, bi) = match (
            solve(&sp.pencil(), &cfg),
            solve(&sp.pencil(), &cfg.clone().with_variant(Variant::Bi)),
        ) {
            (Ok(r), Ok(b)) => (r, b),
            (Err(e), _) | (_, Err(e)) => return Outcome::new(false, format!("seed {seed}: {e}")),
        };
        let r_min = r
            .history
            .iter()
            .filter_map(|h| h.max_residual)
            .fold(f64::INFINITY, f64::min);
        let mut tail: Vec<f64> = bi
            .history
            .iter()
            .filter(|h| h.iter >= 6)
            .filter_map(|h| h.max_residual)
            .collect();
        tail.sort_by(f64::total_cmp);
        let bi_stall = tail.get(tail.len() / 2).copied().unwrap_or(0.0);
        let pair = |res: &FeastResult| {
            let mut v = res.candidate_eigenvalues();
            v.sort_by(|a, b| (a - ill).norm().total_cmp(&(b - ill).norm()));
            v.truncate(2);
            v
        };
        let (rp, bp) = (pair(&r), pair(&bi));
        let digits = if rp.len() == 2 && bp.len() == 2 {
            rp.iter()
                .map(|z| {
                    let d = bp
                        .iter()
                        .map(|w| (z - w).norm())
                        .fold(f64::INFINITY, f64::min);
                    -(d / z.norm()).log10()
                })
                .fold(f64::INFINITY, f64::min)
        } else {
            f64::NAN
        };
        let ok =
            r_min <= R_TARGET && bi_stall >= BI_STALL && (DIGITS.0..=DIGITS.1).contains(&digits);
        pass &= ok;
        parts.push(format!(
            "seed {seed}: R min {:.2}, Bi median(6..{ITERS}) {:.2}, agreement {digits:.1} digits",
            r_min.log10(),
            bi_stall.log10()
        ));
    }
    Outcome::new(
        pass,
        format!(
            "s={S:e}; R <= {R_TARGET:e}, Bi stall >= {BI_STALL:e}, digits in [{}, {}]: {}",
            DIGITS.0,
            DIGITS.1,
            parts.join("; ")
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    const TOL: f64 = 1e-9;
    const TRIALS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for trial in 0..TRIALS {
        let n = rng.random_range(10..=30);
        let m = rng.random_range(1..=5);
        let prob = DiskProblem::random(&mut rng, n, m, 0.9, (1.1, 4.0));
        let s = if trial % 2 == 0 { 1.0 } else { 1e3 };
        let sp = make_synthetic(&prob.lambdas, s, rng.random()).unwrap();
        let k = prob.contour();
        let pencil = sp.pencil();
        let engine = ProjectorEngine::new(
            &pencil,
            build_filter(&k, &gauss_legendre(8).unwrap()),
            ProjectorOptions::default(),
        );
        let xc = sp.x.select_columns(&sp.inside(&k));
        let filtered = match engine.apply_right(&xc) {
            Ok(f) => f,
            Err(e) => return Outcome::new(false, format!("trial {trial}: {e}")),
        };
        worst = worst.max(max_angle_sine(&xc, &filtered));
    }
    Outcome::new(
        worst <= TOL,
        format!("largest principal-angle sine {worst:.1e} over {TRIALS} pencils (tol {TOL:e})"),
    )
}

// ---------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    const TOL: f64 = 1e-8;
    const CLOSURE: f64 = 1e-12;
    let shapes: Vec<(&str, Contour, Vec<C64>, Vec<C64>)> = vec![
        (
            "triangle",
            Contour::polygon(&[c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap(),
            vec![c(0.0, 0.3), c(-0.3, 0.2), c(0.25, 0.4)],
            vec![c(0.0, -0.3), c(0.8, 0.8), c(-2.0, 0.5)],
        ),
        (
            "square",
            Contour::polygon(&[c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)]).unwrap(),
            vec![c(0.5, 0.5), c(-0.4, 0.1), c(0.2, -0.6)],
            vec![c(1.5, 0.0), c(0.0, -1.2), c(3.0, 3.0)],
        ),
        (
            "semicircle",
            Contour::composite(vec![
                Segment::Arc {
                    center: c(0.0, 0.0),
                    radius: 1.0,
                    theta0: 0.0,
                    theta1: PI,
                },
                Segment::Line {
                    from: c(-1.0, 0.0),
                    to: c(1.0, 0.0),
                },
            ])
            .unwrap(),
            vec![c(0.0, 0.5), c(0.4, 0.3), c(-0.5, 0.6)],
            vec![c(0.0, -0.5), c(0.0, 1.2), c(2.0, 0.0)],
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, k, inside, outside) in shapes {
        let geometry = k.closure_defect() <= CLOSURE * k.diameter()
            && k.signed_area() > 0.0
            && inside.iter().all(|z| k.inside(*z))
            && outside.iter().all(|z| !k.inside(*z));
        let mut lam = inside.clone();
        for j in 0..10 {
            lam.push(c(0.0, 0.3) + C64::from_polar(2.5 + 0.15 * j as f64, 0.7 * j as f64));
        }
        let sp = make_synthetic(&lam, 1.0, 9).unwrap();
        let cfg = FeastConfig::new(k.clone(), trapezoidal(8).unwrap(), 6)
            .with_variant(Variant::Bi)
            .with_seed(1);
        let err = solve(&sp.pencil(), &cfg)
            .ok()
            .and_then(|r| match_sets(&r.candidate_eigenvalues(), &inside));
        let ok = geometry && err.is_some_and(|e| e <= TOL);
        pass &= ok;
        parts.push(format!(
            "{name}: geometry {}, Bi-FEAST error {}",
            if geometry { "ok" } else { "FAILED" },
            err.map_or("set mismatch".into(), |e| format!("{e:.1e}"))
        ));
    }
    Outcome::new(
        pass,
        format!("{} (tol {TOL:e}, TR K=8 per segment)", parts.join("; ")),
    )
}

// ---------------------------------------------------------------------------

fn banded_random(n: usize, half_band: usize, diag: f64, rng: &mut ChaCha8Rng) -> ComplexSparse {
    let mut trip = Vec::new();
    for i in 0..n {
        trip.push((i, i, c(diag + rng.random::<f64>(), rng.random::<f64>())));
        for _ in 0..4 {
            let j = (i + rng.random_range(0..=2 * half_band))
                .saturating_sub(half_band)
                .min(n - 1);
            if j != i {
                trip.push((
                    i,
                    j,
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                ));
            }
        }
    }
    ComplexSparse::from_triplets(n, n, &trip).unwrap()
}

fn criterion_10() -> Outcome {
    const N: usize = 2000;
    const APPLIES: usize = 10;
    const SPEEDUP: f64 = 2.5;
    const WORKERS: usize = 4;
    const TOL: f64 = 1e-14;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let a = banded_random(N, 8, 4.0, &mut rng);
    let b = banded_random(N, 2, 8.0, &mut rng);
    let pencil = Pencil::new(Operator::Sparse(a), Operator::Sparse(b)).unwrap();
    let filter = build_filter(
        &Contour::circle(c(0.55, 0.05), 0.1).unwrap(),
        &gauss_legendre(8).unwrap(),
    );
    let q = filter.len();
    let u = ComplexDense::random_gaussian(N, 8, &mut rng);
    let timed = |workers: usize| {
        let start = Instant::now();
        let engine = ProjectorEngine::new(
            &pencil,
            filter.clone(),
            ProjectorOptions {
                workers,
                ..ProjectorOptions::default()
            },
        );
        engine.warm_cache(workers).expect("factorizations");
        let mut out = None;
        for _ in 0..APPLIES {
            out = Some(engine.apply_right(&u).expect("solves"));
        }
        (start.elapsed().as_secs_f64(), out.unwrap(), engine.cached())
    };
    let (t1, y1, cached) = timed(1);
    let (t4, y4, _) = timed(WORKERS);
    let diff = y1.sub(&y4).unwrap().norm_max() / y1.norm_max();
    let speedup = t1 / t4;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let detail = format!(
        "n={N}, q={q} ({cached} factorizations), {APPLIES} applies: 1 worker {t1:.3} s, {WORKERS} workers {t4:.3} s, speedup {speedup:.2} (need {SPEEDUP}); max relative difference {diff:.1e} (tol {TOL:e}); {threads} hardware thread(s)"
    );
    let pass = speedup >= SPEEDUP && diff <= TOL;
    if !pass && diff <= TOL && threads < WORKERS {
        return Outcome::blocked(
            format!("only {threads} hardware thread(s) available, {WORKERS} needed"),
            detail,
        );
    }
    Outcome::new(pass, detail)
}

// ---------------------------------------------------------------------------

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("filter closed form", criterion_1),
        ("QC324 convergence", criterion_2),
        ("QC324 filter gap", criterion_3),
        ("GL vs TR ordering", criterion_4),
        ("oracle equivalence", criterion_5),
        ("rate law", criterion_6),
        ("ill-conditioning contrast", criterion_7),
        ("invariant-subspace exactness", criterion_8),
        ("composite contours", criterion_9),
        ("parallel speedup", criterion_10),
    ];
    let strict = std::env::var_os("NHFEAST_ACCEPTANCE_STRICT").is_some();
    let (mut passed, mut failed, mut blocked) = (0, 0, 0);
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let status = match (&o.blocked, o.pass) {
            (_, true) => {
                passed += 1;
                "PASS".to_string()
            }
            (Some(reason), false) => {
                blocked += 1;
                format!("FAIL (blocked: {reason})")
            }
            (None, false) => {
                failed += 1;
                "FAIL".to_string()
            }
        };
        println!(
            "criterion {:>2} [{name}]: {status} -- {} [{secs:.2} s]",
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {passed} passed, {failed} failed, {blocked} blocked by the environment");
    if failed > 0 || (strict && blocked > 0) {
        std::process::exit(1);
    }
}
