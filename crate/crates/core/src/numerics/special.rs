//! Special functions: log-gamma, log-beta, digamma, regularized incomplete
//! beta and the standard normal CDF/quantile.
//!
//! The public functions validate their arguments and return
//! [`Error::Domain`]; the `pub(crate)` counterparts skip the checks and are
//! used on hot paths where the caller already guarantees the domain.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// ln √(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const CF_MAX_ITER: usize = 200_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Remainder of Stirling's series, lnΓ(x) − [(x−½)ln x − x + ln√(2π)].
/// Accurate to full double precision for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        - inv2
            * (1.0 / 360.0
                - inv2
                    * (1.0 / 1260.0
                        - inv2
                            * (1.0 / 1680.0
                                - inv2
                                    * (1.0 / 1188.0
                                        - inv2
                                            * (691.0 / 360_360.0
                                                - inv2
                                                    * (1.0 / 156.0
                                                        - inv2 * 3617.0 / 122_400.0)))))))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut y = x;
    let mut prod = 1.0;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    let stirling = (y - 0.5) * y.ln() - y + LN_SQRT_2PI + stirling_correction(y);
    if prod == 1.0 {
        stirling
    } else {
        stirling - prod.ln()
    }
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    if p >= 10.0 {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q);
        -0.5 * q.ln()
            + LN_SQRT_2PI
            + corr
            + (p - 0.5) * (p / (p + q)).ln()
            + q * (-p / (p + q)).ln_1p()
    } else if q >= 10.0 {
        let corr = stirling_correction(q) - stirling_correction(p + q);
        ln_gamma(p) + corr + p - p * (p + q).ln() + (q - 0.5) * (-p / (p + q)).ln_1p()
    } else {
        ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)
    }
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b).
///
/// Large arguments are handled with Stirling-series differences so that
/// ln B(10⁸, 1) keeps full relative precision. Symmetric in its arguments
/// bit for bit.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "log_beta requires a, b > 0, got ({a}, {b})"
        )));
    }
    Ok(ln_beta(a, b))
}

/// ln C(n, k) for real n ≥ k ≥ 0.
pub(crate) fn ln_choose(n: f64, k: f64) -> f64 {
    if k == 0.0 || k == n {
        0.0
    } else {
        -(n + 1.0).ln() - ln_beta(k + 1.0, n - k + 1.0)
    }
}

pub(crate) fn psi(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut y = x;
    while y < 6.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2
                                                * (691.0 / 32_760.0
                                                    - inv2
                                                        * (1.0 / 12.0
                                                            - inv2 * 3617.0 / 8160.0)))))));
    acc + y.ln() - 0.5 * inv - tail
}

/// Digamma ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Upward recurrence to x ≥ 6 followed by the asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(psi(x))
}

/// Continued fraction for I_x(a,b) (modified Lentz). Returns the fraction and
/// whether it converged.
fn beta_cf(x: f64, a: f64, b: f64) -> (f64, bool) {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return (h, true);
        }
    }
    (h, false)
}

/// ln I_t(a,b) and ln(1 − I_t(a,b)), each computed without cancellation on
/// its small side. The flag reports continued-fraction convergence.
pub(crate) fn ln_inc_beta_pair(t: f64, a: f64, b: f64) -> (f64, f64, bool) {
    if t <= 0.0 {
        return (f64::NEG_INFINITY, 0.0, true);
    }
    if t >= 1.0 {
        return (0.0, f64::NEG_INFINITY, true);
    }
    let ln_front = a * t.ln() + b * (-t).ln_1p() - ln_beta(a, b);
    if t < (a + 1.0) / (a + b + 2.0) {
        let (cf, ok) = beta_cf(t, a, b);
        let ln_p = ln_front + (cf / a).ln();
        (ln_p, ln_one_minus_exp(ln_p), ok)
    } else {
        let (cf, ok) = beta_cf(1.0 - t, b, a);
        let ln_q = ln_front + (cf / b).ln();
        (ln_one_minus_exp(ln_q), ln_q, ok)
    }
}

/// ln(1 − eˣ) for x ≤ 0.
pub(crate) fn ln_one_minus_exp(x: f64) -> f64 {
    if x >= 0.0 {
        f64::NEG_INFINITY
    } else if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// Regularized incomplete beta I_t(a, b).
pub fn reg_inc_beta(t: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!(
            "reg_inc_beta requires t in [0,1], got {t}"
        )));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "reg_inc_beta requires a, b > 0, got ({a}, {b})"
        )));
    }
    let (ln_p, _, ok) = ln_inc_beta_pair(t, a, b);
    let p = ln_p.exp();
    if !ok {
        return Err(Error::NonConvergence {
            what: "incomplete beta continued fraction".into(),
            estimate: p,
            rel_error: f64::NAN,
        });
    }
    Ok(p)
}

/// Standard normal CDF Φ(z).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Quantile of the lower tail, q ∈ (0, ½].
fn lower_quantile(q: f64) -> f64 {
    // Abramowitz & Stegun 26.2.23 start, then Halley steps.
    let t = (-2.0 * q.ln()).sqrt();
    let mut z = -(t
        - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
            / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t));
    for _ in 0..8 {
        let err = normal_cdf(z) - q;
        let dz = err / normal_pdf(z);
        let step = dz / (1.0 + 0.5 * z * dz);
        z -= step;
        if step.abs() <= 1e-15 * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Standard normal quantile Φ⁻¹(u) for u ∈ (0, 1).
pub fn normal_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!(
            "normal_quantile requires u in (0,1), got {u}"
        )));
    }
    Ok(normal_quantile_unchecked(u))
}

pub(crate) fn normal_quantile_unchecked(u: f64) -> f64 {
    if u == 0.5 {
        0.0
    } else if u < 0.5 {
        lower_quantile(u)
    } else {
        -lower_quantile(1.0 - u)
    }
}
