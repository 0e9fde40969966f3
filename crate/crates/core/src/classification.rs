//! Annealed ERM risk for 0/1 loss.
//!
//! Each hypothesis' training loss is treated as an independent draw from
//! f_L(ℓ) = C(m,ℓ) ∫ r^ℓ (1−r)^(m−ℓ) ρ(r) dr. With H hypotheses the minimum
//! loss has P(L_ERM = ℓ) = S(ℓ)^H − S(ℓ+1)^H, S being the survival function,
//! and the expected ERM risk is Σ_ℓ ⟨R|ℓ⟩ P(L_ERM = ℓ).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curve::{check_grid, collect_points, Curve};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_log, ln_beta, ln_choose, ln_one_minus_exp, log_sum_exp, xlog1py, xlogy,
    QuadratureOptions,
};
use crate::risk_models::RiskDistribution;

/// Truncate the minimum-loss sum once this much probability is accounted for.
const TAIL_CUTOFF: f64 = 1e-12;

/// Size of the hypothesis space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesisCount {
    Finite(f64),
    Infinite,
}

impl HypothesisCount {
    pub fn finite(h: f64) -> Result<Self> {
        let c = HypothesisCount::Finite(h);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HypothesisCount::Finite(h) if !(h >= 1.0 && h.is_finite()) => Err(Error::domain(
                format!("hypothesis count must be >= 1, got {h}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, HypothesisCount::Infinite)
    }
}

impl fmt::Display for HypothesisCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisCount::Finite(h) => write!(f, "{h}"),
            HypothesisCount::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for HypothesisCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(HypothesisCount::Infinite);
        }
        let h: f64 = t
            .parse()
            .map_err(|_| Error::domain(format!("cannot parse hypothesis count '{s}'")))?;
        if h.is_infinite() && h > 0.0 {
            return Ok(HypothesisCount::Infinite);
        }
        HypothesisCount::finite(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationScenario {
    pub dist: RiskDistribution,
    pub m: u64,
    pub h: HypothesisCount,
}

impl ClassificationScenario {
    pub fn new(dist: RiskDistribution, m: u64, h: HypothesisCount) -> Result<Self> {
        let s = ClassificationScenario { dist, m, h };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        self.h.validate()
    }

    pub fn with_m(&self, m: u64) -> Self {
        ClassificationScenario { m, ..*self }
    }
}

/// Training-loss distribution of a single hypothesis, in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct LossPmf {
    log_mass: Vec<f64>,
    log_survival: Vec<f64>,
}

impl LossPmf {
    /// Builds the survival function from `ln f_L(ℓ)`, ℓ = 0..=m.
    pub fn from_log_mass(log_mass: Vec<f64>) -> Result<Self> {
        if log_mass.is_empty() {
            return Err(Error::domain("loss pmf needs at least one entry"));
        }
        let n = log_mass.len();
        // Tail sums from above, cumulative sums from below; S(ℓ) uses whichever
        // is the smaller quantity so that ln S stays accurate near 0 and near 1.
        let mut ln_tail = vec![f64::NEG_INFINITY; n + 1];
        for l in (0..n).rev() {
            ln_tail[l] = log_sum_exp(&[ln_tail[l + 1], log_mass[l]]);
        }
        let mut log_survival = Vec::with_capacity(n + 1);
        log_survival.push(0.0);
        let mut ln_below = f64::NEG_INFINITY;
        for l in 1..=n {
            ln_below = log_sum_exp(&[ln_below, log_mass[l - 1]]);
            let s = if ln_below < -std::f64::consts::LN_2 {
                ln_one_minus_exp(ln_below)
            } else {
                ln_tail[l].min(0.0)
            };
            log_survival.push(s);
        }
        log_survival[n] = f64::NEG_INFINITY;
        Ok(LossPmf {
            log_mass,
            log_survival,
        })
    }

    /// Training-set size m.
    pub fn m(&self) -> u64 {
        (self.log_mass.len() - 1) as u64
    }

    /// `ln f_L(ℓ)` for ℓ = 0..=m.
    pub fn log_mass(&self) -> &[f64] {
        &self.log_mass
    }

    /// `ln P(L ≥ ℓ)` for ℓ = 0..=m+1.
    pub fn log_survival(&self) -> &[f64] {
        &self.log_survival
    }

    pub fn mass(&self, l: u64) -> f64 {
        self.log_mass.get(l as usize).map_or(0.0, |v| v.exp())
    }

    pub fn total_mass(&self) -> f64 {
        log_sum_exp(&self.log_mass).exp()
    }
}

/// f_L(ℓ) = C(m,ℓ) B(a+ℓ, b+m−ℓ) / B(a,b) for the β-Risk model.
pub fn loss_pmf_beta(a: f64, b: f64, m: u64) -> Result<LossPmf> {
    RiskDistribution::beta(a, b)?;
    LossPmf::from_log_mass((0..=m).map(|l| ln_mass_beta(a, b, m, l)).collect())
}

fn ln_mass_beta(a: f64, b: f64, m: u64, l: u64) -> f64 {
    let (mf, lf) = (m as f64, l as f64);
    ln_choose(mf, lf) + ln_beta(a + lf, b + mf - lf) - ln_beta(a, b)
}

/// ln ∫ r^k (1−r)^n ρ(r) dr over the support of `dist`.
pub(crate) fn ln_moment(dist: &RiskDistribution, k: f64, n: f64, what: &str) -> Result<f64> {
    let (lo, hi) = dist.support();
    let g = |r: f64| xlogy(k, r) + xlog1py(n, -r) + dist.ln_density(r);
    integrate_log(g, lo, hi, &QuadratureOptions::default())?.require_converged(what)
}

/// f_L(ℓ) by quadrature against ρ(r).
pub fn loss_pmf_generic(dist: &RiskDistribution, m: u64) -> Result<LossPmf> {
    dist.validate()?;
    let log_mass = (0..=m)
        .into_par_iter()
        .map(|l| {
            let (mf, lf) = (m as f64, l as f64);
            let what = format!("loss pmf entry {l} of m={m}");
            Ok(ln_choose(mf, lf) + ln_moment(dist, lf, mf - lf, &what)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    LossPmf::from_log_mass(log_mass)
}

/// P(L_ERM = ℓ) = S(ℓ)^H − S(ℓ+1)^H for a finite hypothesis count.
pub fn prob_min_loss(pmf: &LossPmf, h: HypothesisCount, l: u64) -> Result<f64> {
    h.validate()?;
    let HypothesisCount::Finite(h) = h else {
        return Err(Error::unsupported(
            "prob_min_loss needs a finite hypothesis count",
        ));
    };
    if l > pmf.m() {
        return Err(Error::domain(format!("loss {l} exceeds m = {}", pmf.m())));
    }
    let s = pmf.log_survival();
    Ok(min_loss_step(h, s[l as usize], s[l as usize + 1]))
}

fn min_loss_step(h: f64, ln_s: f64, ln_s_next: f64) -> f64 {
    let upper = (h * ln_s).exp();
    if ln_s_next == f64::NEG_INFINITY {
        upper
    } else {
        (upper * -(h * (ln_s_next - ln_s)).exp_m1()).max(0.0)
    }
}

/// ⟨R | ℓ⟩, the posterior mean risk of a hypothesis with ℓ training errors.
pub fn posterior_mean_risk(dist: &RiskDistribution, m: u64, l: u64) -> Result<f64> {
    dist.validate()?;
    if l > m {
        return Err(Error::domain(format!("loss {l} exceeds m = {m}")));
    }
    match dist {
        RiskDistribution::BetaRisk { .. } | RiskDistribution::AllBoolean { .. } => {
            let ba = dist.beta_approximation()?;
            Ok((ba.a + l as f64) / (m as f64 + ba.a + ba.b))
        }
        _ => posterior_mean_quadrature(dist, m, l),
    }
}

fn posterior_mean_quadrature(dist: &RiskDistribution, m: u64, l: u64) -> Result<f64> {
    let (mf, lf) = (m as f64, l as f64);
    let what = format!("posterior mean risk (m={m}, l={l})");
    let den = ln_moment(dist, lf, mf - lf, &what)?;
    let num = ln_moment(dist, lf + 1.0, mf - lf, &what)?;
    Ok((num - den).exp())
}

/// Expected ERM risk of the scenario.
///
/// β-Risk and all-Boolean models use their closed forms; perceptron models
/// use log-space quadrature.
pub fn expected_erm_risk(scenario: &ClassificationScenario) -> Result<f64> {
    scenario.validate()?;
    match scenario.dist {
        RiskDistribution::BetaRisk { .. } | RiskDistribution::AllBoolean { .. } => {
            let ba = scenario.dist.beta_approximation()?;
            beta_erm_risk(ba.a, ba.b, scenario.m, scenario.h)
        }
        _ => expected_erm_risk_quadrature(scenario),
    }
}

/// Expected ERM risk computed by quadrature against ρ(r), whatever the model.
pub fn expected_erm_risk_quadrature(scenario: &ClassificationScenario) -> Result<f64> {
    scenario.validate()?;
    let dist = scenario.dist;
    let m = scenario.m;
    let mf = m as f64;
    match scenario.h {
        HypothesisCount::Infinite => {
            let what = format!("zero-loss ERM risk (m={m})");
            let den = ln_moment(&dist, 0.0, mf, &what)?;
            let num = ln_moment(&dist, 1.0, mf, &what)?;
            Ok((num - den).exp())
        }
        HypothesisCount::Finite(h) => finite_h_sum(
            m,
            h,
            |l| {
                let lf = l as f64;
                let what = format!("loss pmf entry {l} of m={m}");
                let ln_int = ln_moment(&dist, lf, mf - lf, &what)?;
                Ok((ln_choose(mf, lf) + ln_int, ln_int))
            },
            |l, ln_int| {
                let lf = l as f64;
                let what = format!("posterior mean risk (m={m}, l={l})");
                let num = ln_moment(&dist, lf + 1.0, mf - lf, &what)?;
                Ok((num - ln_int).exp())
            },
        ),
    }
}

fn beta_erm_risk(a: f64, b: f64, m: u64, h: HypothesisCount) -> Result<f64> {
    let mf = m as f64;
    match h {
        HypothesisCount::Infinite => Ok(a / (a + b + mf)),
        HypothesisCount::Finite(h) => finite_h_sum(
            m,
            h,
            |l| Ok((ln_mass_beta(a, b, m, l), 0.0)),
            |l, _| Ok((a + l as f64) / (mf + a + b)),
        ),
    }
}

/// Σ_ℓ ⟨R|ℓ⟩ P(L_ERM = ℓ), walking ℓ upward until the remaining minimum-loss
/// probability drops below the cutoff. The mass callback returns an auxiliary
/// value that is handed to the posterior-mean callback for the same ℓ.
fn finite_h_sum<M, C>(m: u64, h: f64, mut ln_mass: M, mut cond_mean: C) -> Result<f64>
where
    M: FnMut(u64) -> Result<(f64, f64)>,
    C: FnMut(u64, f64) -> Result<f64>,
{
    let mut ln_below = f64::NEG_INFINITY;
    let mut ln_s = 0.0;
    let mut total = 0.0;
    for l in 0..=m {
        let (lf, aux) = ln_mass(l)?;
        ln_below = log_sum_exp(&[ln_below, lf]);
        let ln_s_next = if l == m {
            f64::NEG_INFINITY
        } else {
            ln_one_minus_exp(ln_below.min(0.0))
        };
        let p = min_loss_step(h, ln_s, ln_s_next);
        if p > 1e-18 {
            total += p * cond_mean(l, aux)?;
        }
        if (h * ln_s_next).exp() < TAIL_CUTOFF {
            break;
        }
        ln_s = ln_s_next;
    }
    Ok(total)
}

/// Expected ERM risk at each m of the grid, evaluated in parallel.
pub fn erm_curve(template: &ClassificationScenario, m_grid: &[u64]) -> Result<Curve> {
    template.validate()?;
    check_grid(m_grid)?;
    let ys = collect_points(
        m_grid
            .par_iter()
            .map(|&m| expected_erm_risk(&template.with_m(m)))
            .collect::<Vec<_>>(),
    )?;
    let mut curve = Curve::new("m", "risk")
        .with_meta("model", template.dist)
        .with_meta("H", template.h);
    curve.points = m_grid.iter().map(|&m| m as f64).zip(ys).collect();
    Ok(curve)
}

/// Inputs of the exact realisable formula ⟨R_ERM|D⟩ = (M1/M0)(1 − (1 − M0)^H).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRealisableInputs {
    /// Fraction of hypotheses consistent with the data.
    pub m0: f64,
    /// Risk-weighted consistent fraction.
    pub m1: f64,
    pub h: HypothesisCount,
}

pub fn exact_realisable_risk(inputs: &ExactRealisableInputs) -> Result<f64> {
    let ExactRealisableInputs { m0, m1, h } = *inputs;
    h.validate()?;
    if m0 == 0.0 {
        return Err(Error::EmptyVersionSpace);
    }
    if !(m0 > 0.0 && m0 <= 1.0) || !(0.0..=m0).contains(&m1) {
        return Err(Error::domain(format!(
            "need 0 < M0 <= 1 and 0 <= M1 <= M0, got M0={m0}, M1={m1}"
        )));
    }
    let ratio = m1 / m0;
    Ok(match h {
        HypothesisCount::Infinite => ratio,
        HypothesisCount::Finite(h) => {
            if m0 == 1.0 {
                ratio
            } else {
                ratio * -(h * (-m0).ln_1p()).exp_m1()
            }
        }
    })
}

/// ln ⟨M0⟩ = ln ∫ (1 − r)^m ρ(r) dr, the log of the mean fraction of
/// hypotheses consistent with m examples (realisable models).
pub fn ln_mean_consistent_fraction(dist: &RiskDistribution, m: u64) -> Result<f64> {
    dist.validate()?;
    match *dist {
        RiskDistribution::BetaRisk { a, b } => Ok(ln_beta(a, b + m as f64) - ln_beta(a, b)),
        _ => ln_moment(dist, 0.0, m as f64, "mean consistent fraction"),
    }
}

/// |X| / (2|X| + m), the closed form quoted for the all-Boolean model.
///
/// Note that a/(a+b+m) with a = b = |X|/2 equals |X|/(2|X| + 2m); this
/// function returns the quoted expression, while [`expected_erm_risk`] on
/// [`RiskDistribution::AllBoolean`] uses the beta surrogate.
pub fn boolean_expected_erm(n_inputs: u64, m: u64) -> Result<f64> {
    if n_inputs == 0 {
        return Err(Error::domain(
            "all-Boolean model needs at least one input pattern",
        ));
    }
    Ok(n_inputs as f64 / (2.0 * n_inputs as f64 + m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> HypothesisCount {
        HypothesisCount::Infinite
    }

    #[test]
    fn beta_pmf_examples() {
        let pmf = loss_pmf_beta(3.0, 4.0, 0).unwrap();
        assert!((pmf.mass(0) - 1.0).abs() < 1e-15);
        let pmf = loss_pmf_beta(1.0, 1.0, 1).unwrap();
        assert!((pmf.mass(0) - 0.5).abs() < 1e-14);
        assert!((pmf.mass(1) - 0.5).abs() < 1e-14);
        let pmf = loss_pmf_beta(100.0, 100.0 / 9.0, 50).unwrap();
        assert!((pmf.total_mass() - 1.0).abs() < 1e-10);
        let s = pmf.log_survival();
        assert_eq!(s[0], 0.0);
        assert!(s.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn generic_pmf_matches_closed_form() {
        let d = RiskDistribution::beta(3.0, 3.0).unwrap();
        let g = loss_pmf_generic(&d, 10).unwrap();
        let c = loss_pmf_beta(3.0, 3.0, 10).unwrap();
        for l in 0..=10 {
            let rel = (g.mass(l) - c.mass(l)).abs() / c.mass(l);
            assert!(rel < 1e-6, "l={l}: {rel}");
        }
        let p = RiskDistribution::realisable_perceptron(10).unwrap();
        let g = loss_pmf_generic(&p, 20).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-8);
        let g = loss_pmf_generic(&p, 0).unwrap();
        assert!((g.mass(0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn prob_min_loss_properties() {
        let pmf = loss_pmf_beta(2.0, 5.0, 30).unwrap();
        for l in 0..=30 {
            let p1 = prob_min_loss(&pmf, HypothesisCount::Finite(1.0), l).unwrap();
            assert!((p1 - pmf.mass(l)).abs() < 1e-14);
        }
        for h in [1.0, 10.0, 1e3, 1e9] {
            let hc = HypothesisCount::Finite(h);
            let total: f64 = (0..=30).map(|l| prob_min_loss(&pmf, hc, l).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10, "H={h}: {total}");
            let p0 = prob_min_loss(&pmf, hc, 0).unwrap();
            let want = 1.0 - (1.0 - pmf.mass(0)).powf(h);
            assert!((p0 - want).abs() < 1e-12);
        }
        assert!(prob_min_loss(&pmf, inf(), 0).is_err());
    }

    #[test]
    fn posterior_mean_examples() {
        let d = RiskDistribution::beta(2.0, 6.0).unwrap();
        assert!((posterior_mean_risk(&d, 0, 0).unwrap() - 0.25).abs() < 1e-15);
        let u = RiskDistribution::beta(1.0, 1.0).unwrap();
        assert!((posterior_mean_risk(&u, 2, 1).unwrap() - 0.5).abs() < 1e-15);
        let k = RiskDistribution::beta(100.0, 100.0 / 9.0).unwrap();
        assert!((posterior_mean_risk(&k, 0, 0).unwrap() - 0.9).abs() < 1e-14);
        let p = RiskDistribution::realisable_perceptron(5).unwrap();
        assert!((posterior_mean_risk(&p, 4, 2).unwrap() - 0.5).abs() < 1e-10);
        assert!(posterior_mean_risk(&p, 4, 5).is_err());
    }

    #[test]
    fn infinite_h_examples() {
        for (a, b, m) in [(2.0, 3.0, 0u64), (100.0, 100.0 / 9.0, 1000)] {
            let s = ClassificationScenario::new(RiskDistribution::beta(a, b).unwrap(), m, inf())
                .unwrap();
            assert_eq!(expected_erm_risk(&s).unwrap(), a / (a + b + m as f64));
        }
        // Quadrature oracle frozen from an independent scipy evaluation.
        let p = RiskDistribution::realisable_perceptron(20).unwrap();
        let v = expected_erm_risk(&ClassificationScenario::new(p, 100, inf()).unwrap()).unwrap();
        assert!((v - 0.148_629_685_144_926_83).abs() < 1e-9, "{v}");
        let v = expected_erm_risk(&ClassificationScenario::new(p, 200, inf()).unwrap()).unwrap();
        assert!((v - 0.084_525_432_261_224_87).abs() < 1e-9, "{v}");
        let v = expected_erm_risk(&ClassificationScenario::new(p, 0, inf()).unwrap()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let u = RiskDistribution::unrealisable_perceptron(10, 0.6745).unwrap();
        let v = expected_erm_risk(&ClassificationScenario::new(u, 0, inf()).unwrap()).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
    }

    #[test]
    fn generic_path_matches_beta_closed_form() {
        for a in [2.0, 10.0, 100.0] {
            let d = RiskDistribution::beta(a, a).unwrap();
            for m in [0u64, 1, 10, 100, 1000, 10_000] {
                let s = ClassificationScenario::new(d, m, inf()).unwrap();
                let q = expected_erm_risk_quadrature(&s).unwrap();
                let c = a / (2.0 * a + m as f64);
                assert!((q - c).abs() / c < 1e-6, "a={a} m={m}: {q} vs {c}");
            }
        }
        let d = RiskDistribution::beta(3.0, 5.0).unwrap();
        for h in [1.0, 50.0, 1e6] {
            let s = ClassificationScenario::new(d, 40, HypothesisCount::Finite(h)).unwrap();
            let q = expected_erm_risk_quadrature(&s).unwrap();
            let c = expected_erm_risk(&s).unwrap();
            assert!((q - c).abs() / c < 1e-6, "H={h}: {q} vs {c}");
        }
    }

    #[test]
    fn single_hypothesis_keeps_prior_mean() {
        let d = RiskDistribution::beta(2.0, 7.0).unwrap();
        for m in [0u64, 5, 500] {
            let s = ClassificationScenario::new(d, m, HypothesisCount::Finite(1.0)).unwrap();
            assert!((expected_erm_risk(&s).unwrap() - 2.0 / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_orders_by_hypothesis_count() {
        let d = RiskDistribution::beta(100.0, 100.0 / 9.0).unwrap();
        let grid: Vec<u64> = vec![0, 1, 3, 10, 30, 100, 300, 1000, 3000, 10_000];
        let mut prev: Option<Curve> = None;
        for h in [
            HypothesisCount::Finite(1e2),
            HypothesisCount::Finite(1e4),
            HypothesisCount::Finite(1e8),
            inf(),
        ] {
            let c = erm_curve(&ClassificationScenario::new(d, 0, h).unwrap(), &grid).unwrap();
            let ys: Vec<f64> = c.ys().collect();
            assert!(ys.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{h}: {ys:?}");
            if let Some(p) = &prev {
                for (lo, hi) in ys.iter().zip(p.ys()) {
                    assert!(*lo <= hi + 1e-12);
                }
            }
            prev = Some(c);
        }
        let c = prev.unwrap();
        for (m, y) in c.points {
            assert_eq!(y, 100.0 / (100.0 + 100.0 / 9.0 + m));
        }
    }

    #[test]
    fn curve_rejects_bad_grid_and_reports_index() {
        let d = RiskDistribution::beta(1.0, 1.0).unwrap();
        let s = ClassificationScenario::new(d, 0, inf()).unwrap();
        assert!(erm_curve(&s, &[3, 2]).is_err());
    }

    #[test]
    fn exact_realisable_examples() {
        let e = |m0, m1, h| exact_realisable_risk(&ExactRealisableInputs { m0, m1, h });
        assert_eq!(e(0.2, 0.05, inf()).unwrap(), 0.25);
        assert!((e(1.0, 0.3, HypothesisCount::Finite(7.0)).unwrap() - 0.3).abs() < 1e-15);
        assert!((e(0.5, 0.25, HypothesisCount::Finite(1.0)).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(e(0.0, 0.0, inf()), Err(Error::EmptyVersionSpace)));
        let mut prev = 0.0;
        for h in [1.0, 2.0, 10.0, 1e3, 1e9] {
            let v = e(0.01, 0.002, HypothesisCount::Finite(h)).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(boolean_expected_erm(1024, 0).unwrap(), 0.5);
        assert_eq!(boolean_expected_erm(1024, 2048).unwrap(), 0.25);
        assert!(boolean_expected_erm(1024, u64::MAX).unwrap() < 1e-15);
        let d = RiskDistribution::all_boolean(1024).unwrap();
        // The Beta(|X|/2, |X|/2) surrogate itself gives |X|/(2|X| + 2m).
        let s = ClassificationScenario::new(d, 2048, inf()).unwrap();
        assert!((expected_erm_risk(&s).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn hypothesis_count_parsing() {
        assert_eq!("inf".parse::<HypothesisCount>().unwrap(), inf());
        assert_eq!(
            "1e9".parse::<HypothesisCount>().unwrap(),
            HypothesisCount::Finite(1e9)
        );
        assert!("0.5".parse::<HypothesisCount>().is_err());
        assert!("abc".parse::<HypothesisCount>().is_err());
    }
}
