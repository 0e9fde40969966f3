//! Adaptive Gauss–Kronrod quadrature in linear and log space.
//!
//! Every integral starts from a panel partition that is geometrically graded
//! toward the endpoints (and, in log space, toward the integrand's mode), then
//! bisects the panel with the largest error estimate until the requested
//! tolerance is met or the evaluation budget is spent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::optimize::maximize_unimodal;
use crate::error::{Error, Result};

// 15-point Kronrod abscissae; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const EVALS_PER_PANEL: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_evaluations: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Result of [`integrate_log`]: `ln ∫ exp(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogQuadratureResult {
    pub log_value: f64,
    /// Error estimate relative to `exp(log_value)`.
    pub rel_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl LogQuadratureResult {
    /// Turns a non-converged result into [`Error::NonConvergence`].
    pub fn require_converged(self, what: &str) -> Result<f64> {
        if self.converged {
            Ok(self.log_value)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                estimate: self.log_value.exp(),
                rel_error: self.rel_error,
            })
        }
    }
}

impl QuadratureResult {
    pub fn require_converged(self, what: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                estimate: self.value,
                rel_error: self.error_estimate / self.value.abs(),
            })
        }
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    opts: &QuadratureOptions,
    mut evaluations: usize,
) -> QuadratureResult {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        let (value, err) = gk15(f, w[0], w[1]);
        evaluations += EVALS_PER_PANEL;
        total += value;
        total_err += err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }
    let mut converged = false;
    let mut frozen_err = 0.0;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            break;
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            converged = true;
            break;
        }
        if evaluations + 2 * EVALS_PER_PANEL > opts.max_evaluations {
            break;
        }
        let Some(panel) = heap.pop() else { break };
        let mid = 0.5 * (panel.a + panel.b);
        let scale = panel.a.abs().max(panel.b.abs());
        if panel.b - panel.a <= 1024.0 * f64::EPSILON * scale || !(mid > panel.a && mid < panel.b) {
            // Below floating-point resolution; keep its error and move on.
            frozen_err += panel.err;
            done.push(panel);
            if frozen_err > 0.5 * total_err {
                // Remaining error sits in panels that cannot be refined.
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(f, panel.a, mid);
        let (v2, e2) = gk15(f, mid, panel.b);
        evaluations += 2 * EVALS_PER_PANEL;
        total += v1 + v2 - panel.value;
        total_err += e1 + e2 - panel.err;
        heap.push(Panel {
            a: panel.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: panel.b,
            value: v2,
            err: e2,
        });
    }
    // Re-sum in position order so the result does not depend on update history.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error_estimate: f64 = panels.iter().map(|p| p.err).sum();
    if converged && error_estimate > opts.abs_tol.max(opts.rel_tol * value.abs()) * 1.000_001 {
        converged = false;
    }
    QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged: converged && value.is_finite(),
    }
}

fn push_graded(points: &mut Vec<f64>, from: f64, to: f64, levels: u32) {
    // Points from + (to − from)·2⁻ᵏ, crowding toward `from`.
    let span = to - from;
    let mut scale = 0.5;
    for _ in 0..levels {
        points.push(from + span * scale);
        scale *= 0.5;
    }
}

fn finalize_breakpoints(mut points: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    points.retain(|&x| x > lo && x < hi);
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Adaptive quadrature of `f` over `[lo, hi]`.
///
/// Endpoint singularities are fine as long as they are integrable: the
/// initial partition is graded toward both ends and `f` is never evaluated
/// at `lo` or `hi` themselves.
pub fn integrate<F>(f: F, lo: f64, hi: f64, opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "integrate requires finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    let mut points = Vec::new();
    for i in 1..8 {
        points.push(lo + (hi - lo) * i as f64 / 8.0);
    }
    let eighth = (hi - lo) / 8.0;
    push_graded(&mut points, lo, lo + eighth, 20);
    push_graded(&mut points, hi, hi - eighth, 20);
    let points = finalize_breakpoints(points, lo, hi);
    Ok(adaptive(&f, &points, opts, 0))
}

/// `ln ∫ exp(g(x)) dx` over `[lo, hi]` for a log-integrand `g`.
///
/// The integrand is located by a scan that is dense near both endpoints,
/// refined to its mode, and integrated as `exp(g − g_max)` on a partition
/// graded toward the mode and the endpoints. Values of g far below machine
/// underflow (e.g. `m·ln(1−r)` for m = 10⁶) are handled exactly.
pub fn integrate_log<G>(
    g: G,
    lo: f64,
    hi: f64,
    opts: &QuadratureOptions,
) -> Result<LogQuadratureResult>
where
    G: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "integrate_log requires finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    let width = hi - lo;
    let mut scan = Vec::with_capacity(256);
    for i in 1..128 {
        scan.push(lo + width * i as f64 / 128.0);
    }
    push_graded(&mut scan, lo, lo + width / 128.0, 46);
    push_graded(&mut scan, hi, hi - width / 128.0, 46);
    let scan = finalize_breakpoints(scan, lo, hi);
    let interior = &scan[1..scan.len() - 1];
    let values: Vec<f64> = interior.iter().map(|&x| g(x)).collect();
    let mut evaluations = values.len();

    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        if best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    let Some(best) = best.filter(|&b| values[b] > f64::NEG_INFINITY) else {
        return Ok(LogQuadratureResult {
            log_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            evaluations,
            converged: true,
        });
    };

    // `scan` is offset by one relative to `interior`.
    let left = scan[best];
    let right = scan[best + 2];
    let count = std::cell::Cell::new(0usize);
    let tol = (right - left) * 1e-9;
    let (mut mode, refined) = maximize_unimodal(
        |x| {
            count.set(count.get() + 1);
            let v = g(x);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        },
        left,
        right,
        tol.max(f64::MIN_POSITIVE),
    )?;
    evaluations += count.get();
    let mut g_max = values[best];
    if refined > g_max && refined.is_finite() {
        g_max = refined;
    } else {
        mode = interior[best];
    }
    if !g_max.is_finite() {
        return Err(Error::domain(
            "integrate_log: log-integrand is +inf inside the interval",
        ));
    }

    let mut points = Vec::new();
    if mode > lo && mode < hi {
        points.push(mode);
        push_graded(&mut points, mode, lo, 40);
        push_graded(&mut points, mode, hi, 40);
    }
    push_graded(&mut points, lo, mode.max(lo + width / 64.0), 30);
    push_graded(&mut points, hi, mode.min(hi - width / 64.0), 30);
    let points = finalize_breakpoints(points, lo, hi);

    let shifted = |x: f64| (g(x) - g_max).exp();
    let res = adaptive(&shifted, &points, opts, evaluations);
    let log_value = if res.value > 0.0 {
        g_max + res.value.ln()
    } else {
        f64::NEG_INFINITY
    };
    Ok(LogQuadratureResult {
        log_value,
        rel_error: if res.value > 0.0 {
            res.error_estimate / res.value
        } else {
            0.0
        },
        evaluations: res.evaluations,
        converged: res.converged,
    })
}
