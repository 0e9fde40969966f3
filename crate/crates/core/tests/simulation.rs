use ermcurve::classification::ln_mean_consistent_fraction;
use ermcurve::montecarlo::{
    estimate_erm_risk, generate_dataset, ks_distance, rejection_acceptance_rate,
    sample_erm_hypothesis, sample_risks, sample_unit_sphere, stream_rng, DatasetKind, GibbsSampler,
    McConfig,
};
use ermcurve::RiskDistribution;

#[test]
fn sphere_draws_are_unit_vectors() {
    let mut rng = stream_rng(1, &[2]);
    for p in [2, 5, 40] {
        let w = sample_unit_sphere(p, &mut rng).unwrap();
        let n: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-12);
    }
}

#[test]
fn datasets_are_reproducible() {
    let a = generate_dataset(DatasetKind::Realisable, 7, 30, &mut stream_rng(5, &[1])).unwrap();
    let b = generate_dataset(DatasetKind::Realisable, 7, 30, &mut stream_rng(5, &[1])).unwrap();
    assert_eq!(a, b);
    let small = generate_dataset(DatasetKind::Realisable, 7, 10, &mut stream_rng(5, &[1])).unwrap();
    assert_eq!(a.prefix(10), small);
    assert_eq!(a.training_errors(&a.teacher), 0);
}

#[test]
fn empty_dataset_accepts_first_draw() {
    let d = generate_dataset(DatasetKind::Realisable, 5, 0, &mut stream_rng(0, &[])).unwrap();
    assert!(sample_erm_hypothesis(&d, &mut stream_rng(0, &[1]), 1)
        .unwrap()
        .is_some());
}

#[test]
fn realisable_risks_match_cdf() {
    let d = RiskDistribution::realisable_perceptron(10).unwrap();
    let xs = sample_risks(&d, 100_000, 21).unwrap();
    assert!(xs.iter().all(|&r| (0.0..=1.0).contains(&r)));
    assert!(ks_distance(&xs, |r| d.cdf(r).unwrap()).unwrap() < 0.02);
}

#[test]
fn unrealisable_sample_mean_matches_quadrature() {
    let d = RiskDistribution::unrealisable_perceptron(10, 0.6745).unwrap();
    let xs = sample_risks(&d, 100_000, 22).unwrap();
    let (lo, hi) = d.support();
    assert!(xs.iter().all(|&r| r >= lo && r <= hi));
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!((mean - d.mean().unwrap()).abs() < 3.0 * sd / n.sqrt());
}

#[test]
fn acceptance_rate_matches_mean_consistent_fraction() {
    let d = RiskDistribution::realisable_perceptron(10).unwrap();
    for m in [5usize, 10, 20] {
        let (datasets, draws) = (400usize, 5000u64);
        let rate = rejection_acceptance_rate(10, m, datasets, draws, 40 + m as u64).unwrap();
        let want = ln_mean_consistent_fraction(&d, m as u64).unwrap().exp();
        // M0 varies between datasets by far more than the binomial noise of
        // the draws, so count each dataset as one Bernoulli trial.
        let sigma = (want * (1.0 - want) / datasets as f64).sqrt();
        assert!(
            (rate - want).abs() < 3.0 * sigma,
            "m={m}: {rate} vs {want} (sigma {sigma})"
        );
    }
}

#[test]
fn prior_mean_at_zero_samples() {
    let mut cfg = McConfig::new(15, 0, 3);
    cfg.sampler = GibbsSampler::Rejection;
    let est = estimate_erm_risk(&cfg).unwrap();
    assert!((est.mean - 0.5).abs() < 3.0 * est.std_error);
    assert!(est.n_effective <= cfg.n_datasets * cfg.n_hypotheses_per_dataset);
}

#[test]
fn risk_decreases_with_more_data() {
    let mut cfg = McConfig::new(15, 15, 8);
    cfg.n_datasets = 100;
    let small = estimate_erm_risk(&cfg).unwrap();
    cfg.m = 60;
    let large = estimate_erm_risk(&cfg).unwrap();
    assert!(large.mean < small.mean);
    assert!(large.std_error >= 0.0 && small.std_error >= 0.0);
}
