//! Monte Carlo validation of the annealed predictions for the perceptron.
//!
//! Every random draw comes from a stream keyed by `(seed, task path)`, so
//! results do not depend on the number of threads.

mod consistency;
mod dataset;
mod gibbs;
mod rng;
mod sphere;
mod truncnorm;

pub use consistency::{estimate_consistency_profile, ConsistencyEstimate, ProfileMethod};
pub use dataset::{generate_dataset, Dataset, DatasetKind};
pub use gibbs::{count_consistent, sample_erm_hypothesis, VersionSpaceChain};
pub use rng::stream_rng;
pub use sphere::sample_unit_sphere;

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::normal_cdf;
use crate::risk_models::RiskDistribution;
use rng::{TAG_DATASET, TAG_GIBBS, TAG_RISKS};
use sphere::angle_between;

/// How hypotheses are drawn from the version space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GibbsSampler {
    /// Uniform draws on the sphere, kept when consistent. Exact but the
    /// acceptance rate decays like ⟨M0⟩, so it only works for small m.
    Rejection,
    /// Hit-and-run on the version-space cone. Approximate (finite burn-in)
    /// but usable at any m.
    HitAndRun { burn_in: usize, thin: usize },
}

impl GibbsSampler {
    /// Hit-and-run with a burn-in and thinning that scale with the dimension.
    pub fn hit_and_run_for(p: usize) -> Self {
        GibbsSampler::HitAndRun {
            burn_in: 200 * p,
            thin: 10 * p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub p: usize,
    pub m: usize,
    pub n_datasets: usize,
    pub n_hypotheses_per_dataset: usize,
    /// Rejection budget per hypothesis; a dataset that exhausts it is dropped.
    pub max_rejection_tries: u64,
    pub seed: u64,
    pub sampler: GibbsSampler,
}

impl McConfig {
    pub fn new(p: usize, m: usize, seed: u64) -> Self {
        McConfig {
            p,
            m,
            n_datasets: 200,
            n_hypotheses_per_dataset: 20,
            max_rejection_tries: 1_000_000,
            seed,
            sampler: GibbsSampler::hit_and_run_for(p),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::domain(format!("p must be >= 2, got {}", self.p)));
        }
        if self.n_datasets == 0 || self.n_hypotheses_per_dataset == 0 {
            return Err(Error::domain(
                "need at least one dataset and one hypothesis per dataset",
            ));
        }
        match self.sampler {
            GibbsSampler::Rejection if self.max_rejection_tries == 0 => {
                Err(Error::domain("rejection budget must be positive"))
            }
            GibbsSampler::HitAndRun { thin: 0, .. } => {
                Err(Error::domain("thinning must be positive"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// Mean over datasets of the per-dataset mean ERM risk.
    pub mean: f64,
    /// Standard error of `mean` across datasets.
    pub std_error: f64,
    /// Total number of hypotheses behind the estimate.
    pub n_effective: usize,
    pub rejected_datasets: usize,
    pub n_datasets_used: usize,
}

/// Mean generalisation error θ/π of Gibbs-sampled consistent perceptrons.
pub fn estimate_erm_risk(config: &McConfig) -> Result<McEstimate> {
    config.validate()?;
    let per_dataset: Vec<Option<f64>> = (0..config.n_datasets)
        .into_par_iter()
        .map(|d| dataset_mean_risk(config, d as u64))
        .collect::<Result<_>>()?;

    let used: Vec<f64> = per_dataset.iter().flatten().copied().collect();
    let rejected = config.n_datasets - used.len();
    if used.is_empty() {
        return Err(Error::AllDatasetsExhausted(config.n_datasets));
    }
    let n = used.len() as f64;
    let mean = used.iter().sum::<f64>() / n;
    let std_error = if used.len() > 1 {
        (used.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        f64::NAN
    };
    Ok(McEstimate {
        mean,
        std_error,
        n_effective: used.len() * config.n_hypotheses_per_dataset,
        rejected_datasets: rejected,
        n_datasets_used: used.len(),
    })
}

fn dataset_mean_risk(config: &McConfig, d: u64) -> Result<Option<f64>> {
    let mut data_rng = stream_rng(config.seed, &[TAG_DATASET, d]);
    let dataset = generate_dataset(DatasetKind::Realisable, config.p, config.m, &mut data_rng)?;
    let mut rng = stream_rng(config.seed, &[TAG_GIBBS, d]);
    let n = config.n_hypotheses_per_dataset;
    let risk = |w: &[f64]| angle_between(w, &dataset.teacher) / std::f64::consts::PI;
    let total = match config.sampler {
        GibbsSampler::Rejection => {
            let mut total = 0.0;
            for _ in 0..n {
                match sample_erm_hypothesis(&dataset, &mut rng, config.max_rejection_tries)? {
                    Some(w) => total += risk(&w),
                    None => return Ok(None),
                }
            }
            total
        }
        GibbsSampler::HitAndRun { burn_in, thin } => {
            let mut chain = VersionSpaceChain::new(&dataset)?;
            chain
                .sample(n, burn_in, thin, &mut rng)
                .iter()
                .map(|w| risk(w))
                .sum()
        }
    };
    Ok(Some(total / n as f64))
}

/// Fraction of uniform draws consistent with a fresh dataset, pooled over
/// datasets. Estimates ⟨M0⟩.
pub fn rejection_acceptance_rate(
    p: usize,
    m: usize,
    n_datasets: usize,
    draws_per_dataset: u64,
    seed: u64,
) -> Result<f64> {
    if n_datasets == 0 || draws_per_dataset == 0 {
        return Err(Error::domain("need at least one dataset and one draw"));
    }
    let hits: Vec<u64> = (0..n_datasets as u64)
        .into_par_iter()
        .map(|d| {
            let mut data_rng = stream_rng(seed, &[TAG_DATASET, d]);
            let dataset = generate_dataset(DatasetKind::Realisable, p, m, &mut data_rng)?;
            let mut rng = stream_rng(seed, &[TAG_GIBBS, d]);
            count_consistent(&dataset, draws_per_dataset, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(hits.iter().sum::<u64>() as f64 / (n_datasets as u64 * draws_per_dataset) as f64)
}

const RISK_CHUNK: usize = 4096;

/// `n` independent risks drawn from `dist`.
///
/// Perceptron risks come from the angle between a uniform hypothesis and a
/// fixed teacher, so they test the density formulas independently.
pub fn sample_risks(dist: &RiskDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    dist.validate()?;
    let n_chunks = n.div_ceil(RISK_CHUNK);
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, &[TAG_RISKS, c as u64]);
            let len = RISK_CHUNK.min(n - c * RISK_CHUNK);
            (0..len).map(|_| sample_one_risk(dist, &mut rng)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

fn sample_one_risk<R: Rng + ?Sized>(dist: &RiskDistribution, rng: &mut R) -> Result<f64> {
    match *dist {
        RiskDistribution::BetaRisk { a, b } => {
            let beta = Beta::new(a, b).map_err(|e| Error::domain(e.to_string()))?;
            Ok(beta.sample(rng))
        }
        RiskDistribution::AllBoolean { n_inputs } => {
            let binom = Binomial::new(n_inputs, 0.5).map_err(|e| Error::domain(e.to_string()))?;
            Ok(binom.sample(rng) as f64 / n_inputs as f64)
        }
        RiskDistribution::RealisablePerceptron { p } => {
            let w = sample_unit_sphere(p as usize, rng)?;
            Ok(w[0].clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
        }
        RiskDistribution::UnrealisablePerceptron { p, delta } => {
            let w = sample_unit_sphere(p as usize, rng)?;
            Ok(normal_cdf(-delta * w[0].clamp(-1.0, 1.0)))
        }
    }
}

/// Kolmogorov–Smirnov distance between the samples' empirical CDF and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain(
            "KS distance needs a non-empty sample without NaN",
        ));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    Ok(s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max))
}
