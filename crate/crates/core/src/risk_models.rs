//! Distributions of risks ρ(r) over randomly drawn hypotheses.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    ln_beta, ln_choose, normal_cdf, normal_quantile_unchecked, reg_inc_beta, xlog1py, xlogy,
};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// A distribution of risks ρ(r).
///
/// `delta` is stored as a positive separation; the minimum achievable risk is
/// Φ(−Δ), so `delta = 0.6745` gives R_min ≈ 0.25.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiskDistribution {
    /// ρ(r) = Beta(r | a, b).
    BetaRisk { a: f64, b: f64 },
    /// All Boolean functions on `n_inputs` input patterns.
    AllBoolean { n_inputs: u64 },
    /// Perceptron with a teacher in the same class; r = θ/π.
    RealisablePerceptron { p: u32 },
    /// Perceptron on two Gaussian clouds separated by `delta`.
    UnrealisablePerceptron { p: u32, delta: f64 },
}

/// Beta(a, b) surrogate for a risk distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaApprox {
    pub a: f64,
    pub b: f64,
}

impl BetaApprox {
    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    pub fn into_distribution(self) -> RiskDistribution {
        RiskDistribution::BetaRisk {
            a: self.a,
            b: self.b,
        }
    }
}

impl RiskDistribution {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        let d = RiskDistribution::BetaRisk { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn all_boolean(n_inputs: u64) -> Result<Self> {
        let d = RiskDistribution::AllBoolean { n_inputs };
        d.validate()?;
        Ok(d)
    }

    pub fn realisable_perceptron(p: u32) -> Result<Self> {
        let d = RiskDistribution::RealisablePerceptron { p };
        d.validate()?;
        Ok(d)
    }

    pub fn unrealisable_perceptron(p: u32, delta: f64) -> Result<Self> {
        let d = RiskDistribution::UnrealisablePerceptron { p, delta };
        d.validate()?;
        Ok(d)
    }

    /// Checks the parameter domains of every variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            RiskDistribution::BetaRisk { a, b } => {
                if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::domain(format!(
                        "beta risk needs a, b > 0, got a={a}, b={b}"
                    )));
                }
            }
            RiskDistribution::AllBoolean { n_inputs } => {
                if n_inputs == 0 {
                    return Err(Error::domain(
                        "all-Boolean model needs at least one input pattern",
                    ));
                }
            }
            RiskDistribution::RealisablePerceptron { p } => {
                if p < 3 {
                    return Err(Error::domain(format!(
                        "realisable perceptron needs p >= 3, got {p}"
                    )));
                }
            }
            RiskDistribution::UnrealisablePerceptron { p, delta } => {
                if p < 4 {
                    return Err(Error::domain(format!(
                        "unrealisable perceptron needs p >= 4, got {p}"
                    )));
                }
                if !(delta > 0.0 && delta.is_finite()) {
                    return Err(Error::domain(format!(
                        "unrealisable perceptron needs a positive finite delta, got {delta}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest interval `(r_min, r_max)` outside which ρ vanishes.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            RiskDistribution::UnrealisablePerceptron { delta, .. } => {
                (normal_cdf(-delta), normal_cdf(delta))
            }
            _ => (0.0, 1.0),
        }
    }

    /// True when a zero-risk hypothesis exists.
    pub fn is_realisable(&self) -> bool {
        !matches!(self, RiskDistribution::UnrealisablePerceptron { .. })
    }

    /// ln ρ(r); `-inf` outside the support.
    pub fn log_density(&self, r: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::domain(format!("risk must lie in [0, 1], got {r}")));
        }
        Ok(self.ln_density(r))
    }

    /// ρ(r); zero outside the support.
    pub fn density(&self, r: f64) -> Result<f64> {
        self.log_density(r).map(f64::exp)
    }

    /// ln ρ(r) without argument checks, for use inside integrands.
    pub(crate) fn ln_density(&self, r: f64) -> f64 {
        match *self {
            RiskDistribution::BetaRisk { a, b } => ln_beta_density(r, a, b),
            RiskDistribution::AllBoolean { n_inputs } => {
                let h = n_inputs as f64 / 2.0;
                ln_beta_density(r, h, h)
            }
            RiskDistribution::RealisablePerceptron { p } => {
                let p = p as f64;
                // sin(πr) evaluated on the nearer half keeps relative accuracy near r = 1.
                let s = (PI * r.min(1.0 - r)).sin();
                PI.ln() + xlogy(p - 2.0, s) - ln_beta(0.5, 0.5 * (p - 1.0))
            }
            RiskDistribution::UnrealisablePerceptron { p, delta } => {
                if r <= 0.0 || r >= 1.0 {
                    return f64::NEG_INFINITY;
                }
                let z = normal_quantile_unchecked(r);
                let u = z / delta;
                let s = (1.0 - u) * (1.0 + u);
                if s <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let p = p as f64;
                LN_SQRT_2PI - delta.ln() - ln_beta(0.5, 0.5 * (p - 1.0))
                    + 0.5 * (p - 3.0) * s.ln()
                    + 0.5 * z * z
            }
        }
    }

    /// Power-law exponent a of ρ(r) ~ r^(a−1) near r = 0.
    pub fn attunement(&self) -> Result<f64> {
        self.validate()?;
        match *self {
            RiskDistribution::BetaRisk { a, .. } => Ok(a),
            RiskDistribution::AllBoolean { n_inputs } => Ok(n_inputs as f64 / 2.0),
            RiskDistribution::RealisablePerceptron { p } => Ok(p as f64 - 1.0),
            RiskDistribution::UnrealisablePerceptron { .. } => Err(Error::unsupported(
                "attunement undefined at r=0: the unrealisable perceptron has no mass below R_min",
            )),
        }
    }

    /// Beta surrogate: (a, b) itself, (|X|/2, |X|/2) or (p−1, p−1).
    pub fn beta_approximation(&self) -> Result<BetaApprox> {
        self.validate()?;
        match *self {
            RiskDistribution::BetaRisk { a, b } => Ok(BetaApprox { a, b }),
            RiskDistribution::AllBoolean { n_inputs } => {
                let h = n_inputs as f64 / 2.0;
                Ok(BetaApprox { a: h, b: h })
            }
            RiskDistribution::RealisablePerceptron { p } => {
                let a = p as f64 - 1.0;
                Ok(BetaApprox { a, b: a })
            }
            RiskDistribution::UnrealisablePerceptron { .. } => Err(Error::unsupported(
                "no beta approximation for the unrealisable perceptron",
            )),
        }
    }

    /// Prior mean risk ∫ r ρ(r) dr.
    pub fn mean(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            RiskDistribution::BetaRisk { a, b } => a / (a + b),
            // The remaining densities are symmetric about ½.
            _ => 0.5,
        })
    }

    /// Cumulative distribution P(R ≤ r).
    pub fn cdf(&self, r: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::domain(format!("risk must lie in [0, 1], got {r}")));
        }
        match *self {
            RiskDistribution::BetaRisk { a, b } => reg_inc_beta(r, a, b),
            RiskDistribution::AllBoolean { n_inputs } => {
                let h = n_inputs as f64 / 2.0;
                reg_inc_beta(r, h, h)
            }
            RiskDistribution::RealisablePerceptron { p } => angle_cdf(p, PI * r),
            RiskDistribution::UnrealisablePerceptron { p, delta } => {
                let (lo, hi) = self.support();
                if r <= lo {
                    return Ok(0.0);
                }
                if r >= hi {
                    return Ok(1.0);
                }
                let cos_theta = (-normal_quantile_unchecked(r) / delta).clamp(-1.0, 1.0);
                angle_cdf(p, cos_theta.acos())
            }
        }
    }

    /// Risk of a perceptron whose weight vector makes angle θ with the teacher.
    pub fn risk_of_angle(&self, theta: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!(
                "angle must lie in [0, pi], got {theta}"
            )));
        }
        match *self {
            RiskDistribution::RealisablePerceptron { .. } => Ok(theta / PI),
            RiskDistribution::UnrealisablePerceptron { delta, .. } => {
                Ok(normal_cdf(-delta * theta.cos()))
            }
            _ => Err(Error::unsupported(
                "risk_of_angle is defined for perceptron models only",
            )),
        }
    }

    /// Exact distribution of the error count E ~ Binomial(|X|, ½) for the
    /// all-Boolean model; entry E is P(E), the risk being E/|X|.
    pub fn boolean_error_pmf(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let RiskDistribution::AllBoolean { n_inputs } = *self else {
            return Err(Error::unsupported(
                "exact pmf exists only for the all-Boolean model",
            ));
        };
        let n = n_inputs as f64;
        Ok((0..=n_inputs)
            .map(|e| (ln_choose(n, e as f64) - n * std::f64::consts::LN_2).exp())
            .collect())
    }
}

impl std::fmt::Display for RiskDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RiskDistribution::BetaRisk { a, b } => write!(f, "beta:a={a},b={b}"),
            RiskDistribution::AllBoolean { n_inputs } => write!(f, "boolean:n={n_inputs}"),
            RiskDistribution::RealisablePerceptron { p } => write!(f, "perceptron:p={p}"),
            RiskDistribution::UnrealisablePerceptron { p, delta } => {
                write!(f, "uperceptron:p={p},delta={delta}")
            }
        }
    }
}

/// Parses the descriptors written by `Display`, e.g. `beta:a=2,b=5` or
/// `uperceptron:p=10,delta=0.6745`.
impl std::str::FromStr for RiskDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::domain(format!("bad distribution descriptor '{s}': {why}"));
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<key>=<value>,..."))?;
        let mut fields = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("value is not a number"))?;
            if fields.insert(k.trim().to_string(), v).is_some() {
                return Err(bad("repeated key"));
            }
        }
        let mut take = |key: &str| {
            fields
                .remove(key)
                .ok_or_else(|| bad(&format!("missing '{key}'")))
        };
        let as_int = |v: f64, key: &str| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v)
            } else {
                Err(bad(&format!("'{key}' must be a nonnegative integer")))
            }
        };
        let dist = match kind.trim() {
            "beta" => RiskDistribution::beta(take("a")?, take("b")?)?,
            "boolean" => RiskDistribution::all_boolean(as_int(take("n")?, "n")? as u64)?,
            "perceptron" => {
                RiskDistribution::realisable_perceptron(as_int(take("p")?, "p")? as u32)?
            }
            "uperceptron" => {
                let p = as_int(take("p")?, "p")? as u32;
                RiskDistribution::unrealisable_perceptron(p, take("delta")?)?
            }
            other => return Err(bad(&format!("unknown kind '{other}'"))),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(bad(&format!("unexpected key '{extra}'")));
        }
        Ok(dist)
    }
}

fn ln_beta_density(r: f64, a: f64, b: f64) -> f64 {
    xlogy(a - 1.0, r) + xlog1py(b - 1.0, -r) - ln_beta(a, b)
}

/// ln of the density sin^(p−2)(θ) / B(½, (p−1)/2) of the angle between a
/// uniformly drawn unit vector in R^p and a fixed direction.
pub fn angle_log_density(p: u32, theta: f64) -> f64 {
    let p = p as f64;
    xlogy(p - 2.0, theta.sin()) - ln_beta(0.5, 0.5 * (p - 1.0))
}

/// P(Θ ≤ θ) for the angle density above.
pub fn angle_cdf(p: u32, theta: f64) -> Result<f64> {
    let half_p = 0.5 * (p as f64 - 1.0);
    let t = theta.min(PI - theta);
    let s = t.sin();
    let lower = 0.5 * reg_inc_beta((s * s).min(1.0), half_p, 0.5)?;
    Ok(if theta <= 0.5 * PI {
        lower
    } else {
        1.0 - lower
    })
}
