//! Sample-complexity bounds, posterior tails and attunement fits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::ln_inc_beta_pair;
use crate::risk_models::RiskDistribution;

/// Default fit window for [`fit_attunement`].
pub const DEFAULT_FIT_WINDOW: (f64, f64) = (1e-4, 1e-2);
pub const DEFAULT_FIT_POINTS: usize = 40;

/// Which of the three forms of the β-Risk sample bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PacVariant {
    /// (2a + 2 ln(1/δ))/ε + 2a − 2b + 1
    MainText,
    /// 2(a + ln(1/δ))/ε + 2a − b + 1
    LemmaStatement,
    /// 2(a + ln(1/δ) + aε)/ε − b + 1
    #[default]
    LemmaProof,
}

impl PacVariant {
    pub const ALL: [PacVariant; 3] = [
        PacVariant::MainText,
        PacVariant::LemmaStatement,
        PacVariant::LemmaProof,
    ];
}

impl fmt::Display for PacVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PacVariant::MainText => "main_text",
            PacVariant::LemmaStatement => "lemma_statement",
            PacVariant::LemmaProof => "lemma_proof",
        })
    }
}

impl FromStr for PacVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "main_text" => Ok(PacVariant::MainText),
            "lemma_statement" => Ok(PacVariant::LemmaStatement),
            "lemma_proof" => Ok(PacVariant::LemmaProof),
            _ => Err(Error::domain(format!("unknown bound variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacQuery {
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub variant: PacVariant,
}

impl PacQuery {
    pub fn validate(&self) -> Result<()> {
        RiskDistribution::beta(self.a, self.b)?;
        check_eps_delta(self.epsilon, self.delta)
    }
}

fn check_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// m* for the selected variant; callers round up.
pub fn pac_sample_bound(query: &PacQuery) -> Result<f64> {
    query.validate()?;
    let PacQuery {
        a,
        b,
        epsilon: e,
        delta,
        variant,
    } = *query;
    let log_inv_delta = -delta.ln();
    Ok(match variant {
        PacVariant::MainText => (2.0 * a + 2.0 * log_inv_delta) / e + 2.0 * a - 2.0 * b + 1.0,
        PacVariant::LemmaStatement => 2.0 * (a + log_inv_delta) / e + 2.0 * a - b + 1.0,
        PacVariant::LemmaProof => 2.0 * (a + log_inv_delta + a * e) / e - b + 1.0,
    })
}

/// (ln H + ln(1/δ))/ε, the classical bound for a finite realisable class.
pub fn classical_pac_bound(h: f64, epsilon: f64, delta: f64) -> Result<f64> {
    if !(h >= 1.0) {
        return Err(Error::domain(format!(
            "hypothesis count must be >= 1, got {h}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok((h.ln() - delta.ln()) / epsilon)
}

/// P(R_ERM ≥ ε) = 1 − I_ε(a, b + m) under the zero-loss β-Risk posterior.
pub fn posterior_tail(a: f64, b: f64, m: f64, epsilon: f64) -> Result<f64> {
    RiskDistribution::beta(a, b)?;
    if !(m >= 0.0) {
        return Err(Error::domain(format!("m must be nonnegative, got {m}")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Ok(1.0);
    }
    if epsilon == 1.0 {
        return Ok(0.0);
    }
    let (_, ln_q, ok) = ln_inc_beta_pair(epsilon, a, b + m);
    if !ok {
        return Err(Error::NonConvergence {
            what: "incomplete beta in posterior_tail".into(),
            estimate: ln_q.exp(),
            rel_error: f64::NAN,
        });
    }
    Ok(ln_q.exp())
}

/// a/m, the leading asymptotic ERM risk.
pub fn asymptotic_prediction(a: f64, m: f64) -> Result<f64> {
    if !(a > 0.0) || !(m >= 1.0) {
        return Err(Error::domain(format!(
            "need a > 0 and m >= 1, got a={a}, m={m}"
        )));
    }
    Ok(a / m)
}

/// Least-squares power law ρ(r) ≈ c₀ r^(exponent − 1) over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub leading_coefficient: f64,
    pub fit_window: (f64, f64),
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
}

fn check_window(window: (f64, f64), n_points: usize) -> Result<()> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi && hi <= 0.25) {
        return Err(Error::domain(format!(
            "fit window must satisfy 0 < lo < hi <= 0.25, got ({lo}, {hi})"
        )));
    }
    if n_points < 10 {
        return Err(Error::domain(format!(
            "need at least 10 fit points, got {n_points}"
        )));
    }
    Ok(())
}

fn log_grid(window: (f64, f64), n: usize) -> impl Iterator<Item = f64> {
    let (lo, hi) = window;
    (0..n).map(move |i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
}

/// Ordinary least squares of y on x: (slope, intercept, rms residual).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, intercept, (ss / n).sqrt())
}

/// Fits the attunement from a log-density: slope of ln ρ against ln r, plus one.
pub fn fit_attunement<F>(log_density: F, window: (f64, f64), n_points: usize) -> Result<PowerLawFit>
where
    F: Fn(f64) -> f64,
{
    check_window(window, n_points)?;
    let mut xs = Vec::with_capacity(n_points);
    let mut ys = Vec::with_capacity(n_points);
    for r in log_grid(window, n_points) {
        let y = log_density(r);
        if !y.is_finite() {
            return Err(Error::domain(format!("density is not positive at r = {r}")));
        }
        xs.push(r.ln());
        ys.push(y);
    }
    let (slope, intercept, residual) = linear_fit(&xs, &ys);
    Ok(PowerLawFit {
        exponent: slope + 1.0,
        leading_coefficient: intercept.exp(),
        fit_window: window,
        residual,
    })
}

/// [`fit_attunement`] applied to a model's density.
pub fn fit_attunement_dist(
    dist: &RiskDistribution,
    window: (f64, f64),
    n_points: usize,
) -> Result<PowerLawFit> {
    dist.validate()?;
    fit_attunement(|r| dist.ln_density(r), window, n_points)
}

/// Fits the attunement from risk samples: slope of ln F̂(r) against ln r, where
/// F̂ is the empirical CDF, since F(r) ≈ (c₀/a) r^a near zero.
pub fn fit_attunement_samples(
    samples: &[f64],
    window: (f64, f64),
    n_points: usize,
) -> Result<PowerLawFit> {
    check_window(window, n_points)?;
    if samples.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::domain("risk samples must lie in [0, 1]"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut xs = Vec::with_capacity(n_points);
    let mut ys = Vec::with_capacity(n_points);
    for r in log_grid(window, n_points) {
        let count = sorted.partition_point(|&s| s <= r);
        if count == 0 {
            return Err(Error::domain(format!(
                "no samples at or below r = {r}; widen the window"
            )));
        }
        xs.push(r.ln());
        ys.push((count as f64 / n).ln());
    }
    let (slope, intercept, residual) = linear_fit(&xs, &ys);
    Ok(PowerLawFit {
        exponent: slope,
        leading_coefficient: slope * intercept.exp(),
        fit_window: window,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{expected_erm_risk, ClassificationScenario, HypothesisCount};

    fn q(a: f64, b: f64, epsilon: f64, delta: f64, variant: PacVariant) -> PacQuery {
        PacQuery {
            a,
            b,
            epsilon,
            delta,
            variant,
        }
    }

    #[test]
    fn bound_examples() {
        let ln100 = 100f64.ln();
        let m = pac_sample_bound(&q(10.0, 10.0, 0.1, 0.01, PacVariant::MainText)).unwrap();
        assert!((m - ((20.0 + 2.0 * ln100) / 0.1 + 1.0)).abs() < 1e-10);
        assert!((m - 293.103_403_719_761_8).abs() < 1e-9);
        let m = pac_sample_bound(&q(10.0, 10.0, 0.1, 0.01, PacVariant::LemmaStatement)).unwrap();
        assert!((m - 303.103_403_719_761_8).abs() < 1e-9);
        let m = pac_sample_bound(&q(10.0, 10.0, 0.1, 0.01, PacVariant::LemmaProof)).unwrap();
        assert!((m - (2.0 * (10.0 + ln100 + 1.0) / 0.1 - 9.0)).abs() < 1e-10);
        for v in PacVariant::ALL {
            let with = pac_sample_bound(&q(3.0, 2.0, 0.2, 1.0, v)).unwrap();
            let want = match v {
                PacVariant::MainText => 6.0 / 0.2 + 6.0 - 4.0 + 1.0,
                PacVariant::LemmaStatement => 6.0 / 0.2 + 6.0 - 2.0 + 1.0,
                PacVariant::LemmaProof => 2.0 * (3.0 + 0.6) / 0.2 - 2.0 + 1.0,
            };
            assert!((with - want).abs() < 1e-12, "{v}");
        }
        assert_eq!(PacVariant::default(), PacVariant::LemmaProof);
        assert!(pac_sample_bound(&q(1.0, 1.0, 1.0, 0.1, PacVariant::MainText)).is_err());
        assert!(pac_sample_bound(&q(1.0, 1.0, 0.5, 0.0, PacVariant::MainText)).is_err());
    }

    #[test]
    fn bound_monotonicity() {
        for v in PacVariant::ALL {
            let base = pac_sample_bound(&q(5.0, 5.0, 0.1, 0.05, v)).unwrap();
            assert!(pac_sample_bound(&q(5.0, 5.0, 0.2, 0.05, v)).unwrap() < base);
            assert!(pac_sample_bound(&q(5.0, 5.0, 0.1, 0.1, v)).unwrap() < base);
            assert!(pac_sample_bound(&q(6.0, 5.0, 0.1, 0.05, v)).unwrap() > base);
        }
    }

    #[test]
    fn classical_examples() {
        assert!((classical_pac_bound(std::f64::consts::E, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let v = classical_pac_bound(2f64.powi(20), 0.1, 0.01).unwrap();
        assert!((v - 184.68).abs() < 0.01, "{v}");
        assert_eq!(classical_pac_bound(1.0, 0.3, 1.0).unwrap(), 0.0);
        assert!(classical_pac_bound(0.5, 0.3, 1.0).is_err());
    }

    #[test]
    fn tail_examples() {
        assert_eq!(posterior_tail(2.0, 3.0, 10.0, 0.0).unwrap(), 1.0);
        assert_eq!(posterior_tail(2.0, 3.0, 10.0, 1.0).unwrap(), 0.0);
        // Beta(1, n) tail is (1 − ε)^n.
        let v = posterior_tail(1.0, 4.0, 6.0, 0.3).unwrap();
        assert!((v - 0.7f64.powi(10)).abs() < 1e-14);
        let m = pac_sample_bound(&q(5.0, 5.0, 0.2, 0.1, PacVariant::LemmaProof))
            .unwrap()
            .ceil();
        assert!(posterior_tail(5.0, 5.0, m, 0.2).unwrap() <= 0.1);
    }

    #[test]
    fn every_variant_sound_when_b_at_most_a() {
        for &a in &[0.5, 2.0, 10.0, 100.0] {
            for k in 2..=10 {
                let b = a / (k as f64 - 1.0);
                for &eps in &[0.01, 0.1, 0.4] {
                    for &delta in &[0.01, 0.1, 1.0] {
                        for v in PacVariant::ALL {
                            let m = pac_sample_bound(&q(a, b, eps, delta, v))
                                .unwrap()
                                .ceil()
                                .max(0.0);
                            let tail = posterior_tail(a, b, m, eps).unwrap();
                            assert!(
                                tail <= delta,
                                "{v} a={a} b={b} eps={eps} delta={delta}: {tail}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn main_text_variant_fails_for_large_b() {
        // With b ≫ a the −2b term overwhelms the bound.
        let (a, b, eps, delta) = (50.0, 5000.0, 0.01, 0.01);
        let m = pac_sample_bound(&q(a, b, eps, delta, PacVariant::MainText))
            .unwrap()
            .ceil();
        assert!(posterior_tail(a, b, m, eps).unwrap() > delta);
        for v in [PacVariant::LemmaStatement, PacVariant::LemmaProof] {
            let m = pac_sample_bound(&q(a, b, eps, delta, v)).unwrap().ceil();
            assert!(posterior_tail(a, b, m, eps).unwrap() <= delta, "{v}");
        }
    }

    #[test]
    fn fit_examples() {
        let fit = fit_attunement(|r| 2.5 * r.ln(), DEFAULT_FIT_WINDOW, DEFAULT_FIT_POINTS).unwrap();
        assert!((fit.exponent - 3.5).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!((fit.leading_coefficient - 1.0).abs() < 1e-10);

        let d = RiskDistribution::beta(5.0, 3.0).unwrap();
        let fit = fit_attunement_dist(&d, DEFAULT_FIT_WINDOW, DEFAULT_FIT_POINTS).unwrap();
        assert!((fit.exponent - 5.0).abs() < 0.02 * 5.0);
        let p = RiskDistribution::realisable_perceptron(20).unwrap();
        let fit = fit_attunement_dist(&p, DEFAULT_FIT_WINDOW, DEFAULT_FIT_POINTS).unwrap();
        assert!((fit.exponent - 19.0).abs() < 0.02 * 19.0);

        for b in [0.5, 3.0, 30.0] {
            let d = RiskDistribution::beta(7.0, b).unwrap();
            let fit = fit_attunement_dist(&d, DEFAULT_FIT_WINDOW, DEFAULT_FIT_POINTS).unwrap();
            assert!((fit.exponent - 7.0).abs() < 0.02 * 7.0, "b={b}");
        }
        let u = RiskDistribution::unrealisable_perceptron(10, 0.6745).unwrap();
        assert!(fit_attunement_dist(&u, DEFAULT_FIT_WINDOW, DEFAULT_FIT_POINTS).is_err());
        assert!(fit_attunement(|r| r.ln(), (0.1, 0.5), 40).is_err());
        assert!(fit_attunement(|r| r.ln(), (0.1, 0.2), 5).is_err());
    }

    #[test]
    fn fit_from_samples() {
        // Deterministic quantile samples of F(r) = r³.
        let n = 200_000;
        let samples: Vec<f64> = (0..n)
            .map(|i| ((i as f64 + 0.5) / n as f64).cbrt())
            .collect();
        let fit = fit_attunement_samples(&samples, (0.05, 0.25), 20).unwrap();
        assert!((fit.exponent - 3.0).abs() < 0.02, "{fit:?}");
        assert!(fit_attunement_samples(&samples, (1e-9, 1e-8), 20).is_err());
    }

    #[test]
    fn asymptotics() {
        assert!((asymptotic_prediction(3.0, 1e4).unwrap() - 3e-4).abs() < 1e-18);
        let d = RiskDistribution::beta(3.0, 3.0).unwrap();
        let s = ClassificationScenario::new(d, 10_000, HypothesisCount::Infinite).unwrap();
        let scaled = 1e4 * expected_erm_risk(&s).unwrap();
        assert!((scaled - 3.0).abs() < 0.01 * 3.0);
        let mut prev = f64::INFINITY;
        for m in [1_000u64, 10_000, 100_000] {
            let s = ClassificationScenario::new(d, m, HypothesisCount::Infinite).unwrap();
            let gap = (m as f64 * expected_erm_risk(&s).unwrap() - 3.0).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(asymptotic_prediction(3.0, 0.0).is_err());
    }
}
