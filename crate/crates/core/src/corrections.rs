//! Data-set fluctuation corrections for the realisable perceptron.
//!
//! The fraction p_r of risk-r hypotheses consistent with one training example
//! has mean 1 − r and variance v_r. Modelling it as Beta(A_r, B_r) gives the
//! typical consistency fraction over m examples,
//! ln p̂(r) = m (ψ(A_r) − ψ(A_r + B_r)), which replaces the annealed (1 − r)^m.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curve::{check_grid, collect_points, Curve};
use crate::error::{Error, Result};
use crate::numerics::{integrate_log, maximize_unimodal, psi, xlogy, QuadratureOptions};
use crate::risk_models::RiskDistribution;

/// Below this Δ_r the beta model is indistinguishable from the annealed one.
const DELTA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationParams {
    pub r: f64,
    pub delta_r: f64,
    pub a_r: f64,
    pub b_r: f64,
    pub v_r: f64,
}

/// arccos(cos²(πr)), evaluated as 2 asin(|sin πr| / √2) which is exact and
/// keeps full relative precision as r → 0.
fn arccos_cos_sq(r: f64) -> f64 {
    let s = (PI * r.min(1.0 - r)).sin().abs();
    2.0 * (s / SQRT_2).asin()
}

fn check_open_unit(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in (0, 1), got {r}")))
    }
}

fn delta_unchecked(r: f64) -> f64 {
    (2.0 * PI * r * (1.0 - r) / arccos_cos_sq(r) - 1.0).max(0.0)
}

/// Δ_r = 2πr(1−r) / arccos(cos²(πr)) − 1.
pub fn delta_r(r: f64) -> Result<f64> {
    check_open_unit(r)?;
    Ok(delta_unchecked(r))
}

/// v_r = r(1−r) − arccos(cos²(πr)) / (2π).
pub fn variance_r(r: f64) -> Result<f64> {
    check_open_unit(r)?;
    Ok((r * (1.0 - r) - arccos_cos_sq(r) / (2.0 * PI)).max(0.0))
}

pub fn fluctuation_params(r: f64) -> Result<FluctuationParams> {
    let delta_r = delta_r(r)?;
    Ok(FluctuationParams {
        r,
        delta_r,
        a_r: (1.0 - r) / delta_r,
        b_r: r / delta_r,
        v_r: variance_r(r)?,
    })
}

/// ψ(A_r) − ψ(A_r + B_r): the per-example log consistency under the beta model.
fn log_consistency_per_example(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let d = delta_unchecked(r);
    if d <= DELTA_FLOOR {
        return (-r).ln_1p();
    }
    psi((1.0 - r) / d) - psi(1.0 / d)
}

/// ln p̂(r) = m (ψ(A_r) − ψ(A_r + B_r)); zero at r = 0.
pub fn log_p_hat(r: f64, m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("r must lie in [0, 1), got {r}")));
    }
    if !(m >= 0.0) {
        return Err(Error::domain(format!("m must be nonnegative, got {m}")));
    }
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(m * log_consistency_per_example(r))
}

/// Fluctuation-corrected ERM risk ∫ r p̂ ρ / ∫ p̂ ρ for the realisable perceptron.
pub fn corrected_expected_erm(p: u32, m: u64) -> Result<f64> {
    let dist = RiskDistribution::realisable_perceptron(p)?;
    if m == 0 {
        return Ok(0.5);
    }
    let mf = m as f64;
    let opts = QuadratureOptions::default();
    let what = format!("corrected ERM risk (p={p}, m={m})");
    let base = |r: f64| dist.ln_density(r) + mf * log_consistency_per_example(r);
    let den = integrate_log(base, 0.0, 1.0, &opts)?.require_converged(&what)?;
    let num =
        integrate_log(|r| xlogy(1.0, r) + base(r), 0.0, 1.0, &opts)?.require_converged(&what)?;
    Ok((num - den).exp())
}

/// Corrected ERM risk at each m of the grid.
pub fn corrected_curve(p: u32, m_grid: &[u64]) -> Result<Curve> {
    RiskDistribution::realisable_perceptron(p)?;
    check_grid(m_grid)?;
    let ys = collect_points(
        m_grid
            .par_iter()
            .map(|&m| corrected_expected_erm(p, m))
            .collect::<Vec<_>>(),
    )?;
    let mut curve = Curve::new("m", "risk")
        .with_meta("model", format!("perceptron:p={p}"))
        .with_meta("variant", LimitVariant::Corrected);
    curve.points = m_grid.iter().map(|&m| m as f64).zip(ys).collect();
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVariant {
    Annealed,
    Corrected,
}

impl fmt::Display for LimitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitVariant::Annealed => "annealed",
            LimitVariant::Corrected => "corrected",
        })
    }
}

impl FromStr for LimitVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annealed" => Ok(LimitVariant::Annealed),
            "corrected" => Ok(LimitVariant::Corrected),
            _ => Err(Error::domain(format!("unknown limit variant '{s}'"))),
        }
    }
}

/// Lower end of the search interval for the limit curve.
const LIMIT_R_MIN: f64 = 1e-12;

/// Result of maximising the large-p exponent at one α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPoint {
    pub alpha: f64,
    pub risk: f64,
    /// The maximiser sits on the edge of (0, ½].
    pub at_boundary: bool,
}

/// argmax over r ∈ (0, ½] of ln sin(πr) + α c(r).
pub fn limit_point(alpha: f64, variant: LimitVariant) -> Result<LimitPoint> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let c = |r: f64| match variant {
        LimitVariant::Annealed => (-r).ln_1p(),
        LimitVariant::Corrected => log_consistency_per_example(r),
    };
    let g = |r: f64| (PI * r).sin().ln() + alpha * c(r);

    // Coarse scan on a grid that is dense in log r, then golden-section refinement.
    let n = 400;
    let grid: Vec<f64> = (0..=n)
        .map(|i| {
            let u = i as f64 / n as f64;
            LIMIT_R_MIN * (0.5 / LIMIT_R_MIN).powf(u)
        })
        .collect();
    let (best, _) = grid.iter().enumerate().map(|(i, &r)| (i, g(r))).fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
    );
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(n)];
    let (r, _) = maximize_unimodal(g, lo, hi, (hi - lo) * 1e-12)?;
    let at_boundary = r <= LIMIT_R_MIN * 1.000_001 || r >= 0.5 * (1.0 - 1e-9);
    Ok(LimitPoint {
        alpha,
        risk: r,
        at_boundary,
    })
}

/// Limit curve over an α grid.
pub fn limit_curve(alpha_grid: &[f64], variant: LimitVariant) -> Result<Curve> {
    if alpha_grid.is_empty() {
        return Err(Error::domain("empty alpha grid"));
    }
    if alpha_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("alpha grid must be strictly increasing"));
    }
    let points: Vec<LimitPoint> = alpha_grid
        .par_iter()
        .map(|&a| limit_point(a, variant))
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::CurvePoint {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let boundary: Vec<String> = points
        .iter()
        .filter(|p| p.at_boundary)
        .map(|p| p.alpha.to_string())
        .collect();
    let mut curve = Curve::new("alpha", "risk").with_meta("variant", variant);
    if !boundary.is_empty() {
        curve = curve.with_meta("boundary_alphas", boundary.join(";"));
    }
    curve.points = points.iter().map(|p| (p.alpha, p.risk)).collect();
    Ok(curve)
}
