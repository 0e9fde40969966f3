use ermcurve::classification::{exact_realisable_risk, expected_erm_risk, ExactRealisableInputs};
use ermcurve::corrections::{corrected_expected_erm, log_p_hat, variance_r};
use ermcurve::montecarlo::stream_rng;
use ermcurve::numerics::{
    digamma, integrate, integrate_log, log_beta, reg_inc_beta, QuadratureOptions,
};
use ermcurve::pac::{pac_sample_bound, posterior_tail, PacQuery, PacVariant};
use ermcurve::regression::expected_erm_risk_regression;
use ermcurve::{ClassificationScenario, HypothesisCount, RiskDistribution};
use proptest::prelude::*;
use rand::Rng;

fn inf() -> HypothesisCount {
    HypothesisCount::Infinite
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_beta_is_symmetric(a in 1e-3f64..1e4, b in 1e-3f64..1e4) {
        prop_assert_eq!(log_beta(a, b).unwrap(), log_beta(b, a).unwrap());
    }

    #[test]
    fn digamma_recurrence(x in 0.01f64..100.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn inc_beta_reflection(t in 0.0f64..=1.0, a in 0.05f64..200.0, b in 0.05f64..200.0) {
        let s = reg_inc_beta(t, a, b).unwrap() + reg_inc_beta(1.0 - t, b, a).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12, "sum {}", s);
    }

    #[test]
    fn inc_beta_is_monotone(t in 0.0f64..0.99, dt in 0.0f64..0.01, a in 0.1f64..50.0, b in 0.1f64..50.0) {
        prop_assert!(reg_inc_beta(t + dt, a, b).unwrap() >= reg_inc_beta(t, a, b).unwrap());
    }

    #[test]
    fn log_and_linear_quadrature_agree(a in 0.6f64..30.0, b in 1.0f64..30.0) {
        let opts = QuadratureOptions::default();
        let lin = integrate(|r: f64| r.powf(a - 1.0) * (1.0 - r).powf(b - 1.0), 0.0, 1.0, &opts).unwrap();
        let log = integrate_log(|r: f64| (a - 1.0) * r.ln() + (b - 1.0) * (-r).ln_1p(), 0.0, 1.0, &opts).unwrap();
        prop_assert!((log.log_value.exp() / lin.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn beta_risk_curve_is_nonincreasing(a in 0.5f64..50.0, b in 0.5f64..50.0, m in 0u64..10_000, h in 1.0f64..1e9) {
        let d = RiskDistribution::beta(a, b).unwrap();
        for hc in [inf(), HypothesisCount::Finite(h)] {
            let r0 = expected_erm_risk(&ClassificationScenario::new(d, m, hc).unwrap()).unwrap();
            let r1 = expected_erm_risk(&ClassificationScenario::new(d, m + 1, hc).unwrap()).unwrap();
            prop_assert!(r1 <= r0 * (1.0 + 1e-9), "m={} {} -> {}", m, r0, r1);
        }
    }

    #[test]
    fn exact_realisable_risk_nonincreasing_in_h(m0 in 1e-6f64..1.0, frac in 0.0f64..1.0, h in 1.0f64..1e8) {
        let m1 = m0 * frac;
        let at = |h: f64| exact_realisable_risk(&ExactRealisableInputs { m0, m1, h: HypothesisCount::Finite(h) }).unwrap();
        prop_assert!(at(2.0 * h) <= at(h) + 1e-15);
        prop_assert!(at(h) <= m1 / m0 * (1.0 + 1e-12));
    }

    #[test]
    fn variance_is_nonnegative(r in 1e-6f64..=0.5) {
        prop_assert!(variance_r(r).unwrap() >= 0.0);
    }

    #[test]
    fn log_p_hat_nonincreasing_in_r(r in 0.001f64..0.49, dr in 1e-4f64..0.009, m in 1.0f64..1e4) {
        prop_assert!(log_p_hat(r + dr, m).unwrap() <= log_p_hat(r, m).unwrap() + 1e-12);
    }

    #[test]
    fn lemma_proof_bound_is_sound(a in 0.5f64..100.0, b in 0.5f64..1e4, eps in 0.001f64..0.5, delta in 1e-6f64..0.5) {
        let q = PacQuery { a, b, epsilon: eps, delta, variant: PacVariant::LemmaProof };
        let m = pac_sample_bound(&q).unwrap().ceil().max(0.0);
        prop_assert!(posterior_tail(a, b, m, eps).unwrap() <= delta);
    }

    #[test]
    fn pac_bound_monotone(a in 0.5f64..100.0, b in 0.5f64..100.0, eps in 0.01f64..0.5, delta in 1e-4f64..0.5) {
        for variant in PacVariant::ALL {
            let m = |a: f64, eps: f64, delta: f64| pac_sample_bound(&PacQuery { a, b, epsilon: eps, delta, variant }).unwrap();
            let base = m(a, eps, delta);
            prop_assert!(m(a, eps * 1.1, delta) < base);
            prop_assert!(m(a, eps, delta * 1.1) < base);
            prop_assert!(m(a * 1.1, eps, delta) > base);
        }
    }
}

#[test]
fn all_variants_sound_on_concentrated_priors() {
    // With b = a/(k−1) the prior mean is 1/k, the regime all three forms cover.
    let mut rng = stream_rng(2024, &[]);
    let mut next = || rng.gen::<f64>();
    for _ in 0..20 {
        let a = 1.0 + 99.0 * next();
        let k = 2.0 + 8.0 * next();
        let b = a / (k - 1.0);
        let eps = 0.01 + 0.2 * next();
        let delta = 10f64.powf(-1.0 - 4.0 * next());
        for variant in PacVariant::ALL {
            let m = pac_sample_bound(&PacQuery {
                a,
                b,
                epsilon: eps,
                delta,
                variant,
            })
            .unwrap()
            .ceil()
            .max(0.0);
            let tail = posterior_tail(a, b, m, eps).unwrap();
            assert!(
                tail <= delta,
                "{variant} a={a} b={b} eps={eps} delta={delta}: tail {tail}"
            );
        }
    }
}

#[test]
fn every_model_curve_is_nonincreasing() {
    let dists = [
        RiskDistribution::beta(3.0, 7.0).unwrap(),
        RiskDistribution::all_boolean(64).unwrap(),
        RiskDistribution::realisable_perceptron(10).unwrap(),
        RiskDistribution::unrealisable_perceptron(10, 0.6745).unwrap(),
    ];
    let grid = [0u64, 1, 3, 10, 30, 100, 300, 1000, 3000, 10_000];
    for d in dists {
        for h in [inf(), HypothesisCount::Finite(1e6)] {
            let mut prev = f64::INFINITY;
            for &m in &grid {
                let r = expected_erm_risk(&ClassificationScenario::new(d, m, h).unwrap()).unwrap();
                assert!(r <= prev * (1.0 + 1e-9), "{d} H={h} m={m}: {r} > {prev}");
                prev = r;
            }
        }
    }
}

#[test]
fn unrealisable_curve_plateaus_at_minimum_risk() {
    let d = RiskDistribution::unrealisable_perceptron(10, 0.6745).unwrap();
    let r_min = d.support().0;
    let r = expected_erm_risk(
        &ClassificationScenario::new(d, 10_000, HypothesisCount::Finite(1e6)).unwrap(),
    )
    .unwrap();
    assert!(r >= r_min && r < r_min + 0.05, "{r} vs {r_min}");
}

#[test]
fn corrected_curve_is_nonincreasing_and_starts_at_half() {
    assert_eq!(corrected_expected_erm(15, 0).unwrap(), 0.5);
    let mut prev = 0.5;
    for m in [5u64, 15, 30, 60, 120, 300, 1000] {
        let r = corrected_expected_erm(15, m).unwrap();
        assert!(r <= prev, "m={m}");
        prev = r;
    }
}

#[test]
fn corrected_below_annealed_for_large_m() {
    let d = RiskDistribution::realisable_perceptron(20).unwrap();
    for m in [200u64, 400, 1000] {
        let ann = expected_erm_risk(&ClassificationScenario::new(d, m, inf()).unwrap()).unwrap();
        assert!(corrected_expected_erm(20, m).unwrap() < ann);
    }
}

#[test]
fn regression_nonincreasing_in_h() {
    for (a, m) in [(100.0, 50u64), (10.0, 20)] {
        let mut prev = f64::INFINITY;
        for h in [1.0, 10.0, 100.0, 1e4] {
            let r = expected_erm_risk_regression(a, m, HypothesisCount::Finite(h)).unwrap();
            assert!(r <= prev, "a={a} m={m} H={h}");
            prev = r;
        }
    }
}
