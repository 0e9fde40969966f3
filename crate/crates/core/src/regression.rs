//! γ-Precision regression model.
//!
//! Each hypothesis has precision τ ~ Gamma(a, rate a) and risk 1/τ; its
//! training loss L over m points then has the marginal density
//! f_L(L) = (L/a)^(m/2−1) / (a B(a, m/2) (1 + L/a)^(a+m/2)).
//! Integrals are taken in t = L/(L+a), under which f_L(L) dL = Beta(t | m/2, a) dt.

use rayon::prelude::*;

use crate::classification::HypothesisCount;
use crate::curve::{check_grid, collect_points, Curve};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_log, ln_beta, ln_inc_beta_pair, xlog1py, xlogy, QuadratureOptions,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPrecisionModel {
    /// Gamma shape (and rate) of the precision prior.
    pub a: f64,
    pub h: HypothesisCount,
    pub m: u64,
}

impl GammaPrecisionModel {
    pub fn new(a: f64, h: HypothesisCount, m: u64) -> Result<Self> {
        let model = GammaPrecisionModel { a, h, m };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        check_a(self.a)?;
        self.h.validate()?;
        if self.a + self.m as f64 / 2.0 <= 1.0 {
            return Err(Error::domain(format!(
                "expected ERM risk requires a + m/2 > 1, got a={}, m={}",
                self.a, self.m
            )));
        }
        Ok(())
    }

    pub fn expected_erm_risk(&self) -> Result<f64> {
        expected_erm_risk_regression(self.a, self.m, self.h)
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "gamma shape a must be positive, got {a}"
        )))
    }
}

fn check_loss_args(l: f64, a: f64, m: u64) -> Result<()> {
    check_a(a)?;
    if m == 0 {
        return Err(Error::domain("loss density needs m >= 1"));
    }
    if !(l >= 0.0) {
        return Err(Error::domain(format!("loss must be nonnegative, got {l}")));
    }
    Ok(())
}

fn ln_loss_density(l: f64, a: f64, k: f64) -> f64 {
    let x = l / a;
    xlogy(k - 1.0, x) - xlog1py(a + k, x) - a.ln() - ln_beta(a, k)
}

/// Marginal density f_L(L) of a single hypothesis' training loss.
pub fn loss_density(l: f64, a: f64, m: u64) -> Result<f64> {
    check_loss_args(l, a, m)?;
    if l.is_infinite() {
        return Ok(0.0);
    }
    Ok(ln_loss_density(l, a, m as f64 / 2.0).exp())
}

/// F_L(L) = I_{L/(L+a)}(m/2, a).
pub fn loss_cdf(l: f64, a: f64, m: u64) -> Result<f64> {
    check_loss_args(l, a, m)?;
    if l.is_infinite() {
        return Ok(1.0);
    }
    let (ln_p, _, ok) = ln_inc_beta_pair(l / (l + a), m as f64 / 2.0, a);
    if !ok {
        return Err(Error::NonConvergence {
            what: "incomplete beta in loss_cdf".into(),
            estimate: ln_p.exp(),
            rel_error: f64::NAN,
        });
    }
    Ok(ln_p.exp())
}

/// Density of the minimum loss over H hypotheses, H f_L (1 − F_L)^(H−1).
pub fn erm_loss_density(l: f64, a: f64, m: u64, h: f64) -> Result<f64> {
    check_loss_args(l, a, m)?;
    HypothesisCount::finite(h)?;
    if l.is_infinite() {
        return Ok(0.0);
    }
    let k = m as f64 / 2.0;
    let ln_f = ln_loss_density(l, a, k);
    if h == 1.0 {
        return Ok(ln_f.exp());
    }
    let (_, ln_q, ok) = ln_inc_beta_pair(l / (l + a), k, a);
    if !ok {
        return Err(Error::NonConvergence {
            what: "incomplete beta in erm_loss_density".into(),
            estimate: f64::NAN,
            rel_error: f64::NAN,
        });
    }
    Ok((h.ln() + ln_f + (h - 1.0) * ln_q).exp())
}

/// ⟨R_ERM⟩ = ∫ (a+L)/(a+m/2−1) · H f_L (1−F_L)^(H−1) dL.
///
/// With infinitely many hypotheses L_ERM = 0 and the risk is a/(a+m/2−1).
pub fn expected_erm_risk_regression(a: f64, m: u64, h: HypothesisCount) -> Result<f64> {
    GammaPrecisionModel { a, h, m }.validate()?;
    let k = m as f64 / 2.0;
    let denom = a + k - 1.0;
    let h = match h {
        HypothesisCount::Infinite => return Ok(a / denom),
        HypothesisCount::Finite(_) if m == 0 => return Ok(a / denom),
        HypothesisCount::Finite(h) => h,
    };
    let failed = std::cell::Cell::new(false);
    let ln_front = a.ln() - denom.ln() + h.ln() - ln_beta(k, a);
    let g = |t: f64| {
        let tail = if h == 1.0 {
            0.0
        } else {
            let (_, ln_q, ok) = ln_inc_beta_pair(t, k, a);
            if !ok {
                failed.set(true);
            }
            (h - 1.0) * ln_q
        };
        // a + L = a / (1 − t)
        ln_front + xlogy(k - 1.0, t) + xlog1py(a - 2.0, -t) + tail
    };
    let res = integrate_log(g, 0.0, 1.0, &QuadratureOptions::default())?;
    if failed.get() {
        return Err(Error::NonConvergence {
            what: format!("incomplete beta inside regression risk (a={a}, m={m}, H={h})"),
            estimate: res.log_value.exp(),
            rel_error: res.rel_error,
        });
    }
    let ln_risk = res.require_converged(&format!("regression ERM risk (a={a}, m={m}, H={h})"))?;
    Ok(ln_risk.exp())
}

/// Regression ERM risk at each m of the grid, evaluated in parallel.
pub fn regression_curve(a: f64, h: HypothesisCount, m_grid: &[u64]) -> Result<Curve> {
    check_a(a)?;
    h.validate()?;
    check_grid(m_grid)?;
    let ys = collect_points(
        m_grid
            .par_iter()
            .map(|&m| expected_erm_risk_regression(a, m, h))
            .collect::<Vec<_>>(),
    )?;
    let mut curve = Curve::new("m", "risk")
        .with_meta("model", format!("gamma-precision:a={a}"))
        .with_meta("H", h);
    curve.points = m_grid.iter().map(|&m| m as f64).zip(ys).collect();
    Ok(curve)
}
