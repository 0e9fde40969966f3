//! Estimating p(r, D): the fraction of risk-r hypotheses consistent with a dataset.
//!
//! Hypotheses at risk r are w = cos(πr) w* + sin(πr) u with u uniform on the
//! unit sphere orthogonal to the teacher w*.

use rand::Rng;
use rayon::prelude::*;

use super::dataset::{generate_dataset, Dataset, DatasetKind};
use super::rng::{stream_rng, TAG_DATASET, TAG_PROBE};
use super::sphere::{dot, gaussian_vector};
use crate::error::{Error, Result};

/// How p(r, D) is estimated for each dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMethod {
    /// Draw `n_probes` hypotheses and count the consistent ones.
    Direct { n_probes: usize },
    /// Telescoping product of conditional pass rates, one example at a time,
    /// with `walkers` particles refreshed by `moves` elliptical-slice updates
    /// per stage. Reaches fractions far below 1/n_probes.
    Splitting { walkers: usize, moves: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyEstimate {
    pub r: f64,
    /// Mean of ln p(r, D) over the datasets with a finite estimate.
    pub mean_log_p: f64,
    /// Between-dataset variance of ln p(r, D).
    pub var_log_p: f64,
    pub std_error: f64,
    pub n_datasets_used: usize,
    /// Datasets where no consistent hypothesis was found.
    pub zero_success_datasets: usize,
}

/// Examples expressed in a frame whose first axis is the teacher:
/// `along[μ] = y·x·w*` and `across[μ]` holds the other p − 1 coordinates of y·x.
struct TeacherFrame {
    q: usize,
    along: Vec<f64>,
    across: Vec<f64>,
}

impl TeacherFrame {
    fn new(dataset: &Dataset) -> Self {
        let p = dataset.p;
        // Householder reflection H with H w* = e₁.
        let mut v = dataset.teacher.clone();
        v[0] -= 1.0;
        let vv = dot(&v, &v);
        let mut along = Vec::with_capacity(dataset.m());
        let mut across = Vec::with_capacity(dataset.m() * (p - 1));
        for i in 0..dataset.m() {
            let y = dataset.labels[i];
            let x = dataset.row(i);
            let k = if vv > 1e-300 {
                2.0 * dot(&v, x) / vv
            } else {
                0.0
            };
            along.push(y * (x[0] - k * v[0]));
            across.extend((1..p).map(|j| y * (x[j] - k * v[j])));
        }
        TeacherFrame {
            q: p - 1,
            along,
            across,
        }
    }

    fn m(&self) -> usize {
        self.along.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.across[i * self.q..(i + 1) * self.q]
    }
}

/// Successful probes out of `n_probes` at risk r.
fn direct_successes<R: Rng + ?Sized>(
    frame: &TeacherFrame,
    r: f64,
    n_probes: usize,
    rng: &mut R,
) -> u64 {
    let (s, c) = (std::f64::consts::PI * r).sin_cos();
    // Examples with the smallest teacher margin fail most often; test them first.
    let mut order: Vec<usize> = (0..frame.m()).collect();
    order.sort_by(|&i, &j| frame.along[i].total_cmp(&frame.along[j]));
    let mut hits = 0;
    for _ in 0..n_probes {
        let g = gaussian_vector(frame.q, rng);
        let norm = dot(&g, &g).sqrt();
        if order
            .iter()
            .all(|&i| c * frame.along[i] * norm + s * dot(frame.row(i), &g) > 0.0)
        {
            hits += 1;
        }
    }
    hits
}

/// ln p(r, D) by sequential splitting; `-inf` if every walker dies.
fn splitting_log_fraction<R: Rng + ?Sized>(
    frame: &TeacherFrame,
    r: f64,
    walkers: usize,
    moves: usize,
    rng: &mut R,
) -> f64 {
    let (s, c) = (std::f64::consts::PI * r).sin_cos();
    let q = frame.q;
    let ok =
        |i: usize, g: &[f64], norm: f64| c * frame.along[i] * norm + s * dot(frame.row(i), g) > 0.0;

    let mut particles: Vec<Vec<f64>> = (0..walkers).map(|_| gaussian_vector(q, rng)).collect();
    let mut log_p = 0.0;
    for k in 0..frame.m() {
        let alive: Vec<usize> = (0..walkers)
            .filter(|&j| {
                let g = &particles[j];
                ok(k, g, dot(g, g).sqrt())
            })
            .collect();
        if alive.is_empty() {
            return f64::NEG_INFINITY;
        }
        log_p += (alive.len() as f64 / walkers as f64).ln();

        // Systematic resampling of the survivors back to `walkers` particles.
        let offset: f64 = rng.gen();
        let step = alive.len() as f64 / walkers as f64;
        particles = (0..walkers)
            .map(|j| particles[alive[((offset + j as f64) * step) as usize % alive.len()]].clone())
            .collect();

        for g in particles.iter_mut() {
            for _ in 0..moves {
                elliptical_slice(frame, k + 1, c, s, g, rng);
            }
        }
    }
    log_p
}

/// One elliptical-slice update of `g` ~ N(0, I) restricted to the first `k`
/// constraints. Projections are precomputed so each shrink costs O(k).
fn elliptical_slice<R: Rng + ?Sized>(
    frame: &TeacherFrame,
    k: usize,
    c: f64,
    s: f64,
    g: &mut [f64],
    rng: &mut R,
) {
    let nu = gaussian_vector(frame.q, rng);
    let gg = dot(g, g);
    let nn = dot(&nu, &nu);
    let gn = dot(g, &nu);
    let bg: Vec<f64> = (0..k).map(|i| dot(frame.row(i), g)).collect();
    let bn: Vec<f64> = (0..k).map(|i| dot(frame.row(i), &nu)).collect();

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut phi = rng.gen_range(0.0..two_pi);
    let (mut lo, mut hi) = (phi - two_pi, phi);
    for _ in 0..100 {
        let (sp, cp) = phi.sin_cos();
        let norm = (cp * cp * gg + sp * sp * nn + 2.0 * cp * sp * gn)
            .max(0.0)
            .sqrt();
        let feasible =
            (0..k).all(|i| c * frame.along[i] * norm + s * (cp * bg[i] + sp * bn[i]) > 0.0);
        if feasible {
            for (x, n) in g.iter_mut().zip(&nu) {
                *x = *x * cp + n * sp;
            }
            return;
        }
        if phi < 0.0 {
            lo = phi;
        } else {
            hi = phi;
        }
        phi = rng.gen_range(lo..hi);
    }
}

/// Mean and variance over datasets of ln p(r, D) at each r of the grid.
pub fn estimate_consistency_profile(
    p: usize,
    m: usize,
    r_grid: &[f64],
    n_datasets: usize,
    method: ProfileMethod,
    seed: u64,
) -> Result<Vec<ConsistencyEstimate>> {
    if r_grid.is_empty() || r_grid.iter().any(|&r| !(r > 0.0 && r <= 0.5)) {
        return Err(Error::domain(
            "consistency profile needs a non-empty grid inside (0, 1/2]",
        ));
    }
    if p < 2 || n_datasets == 0 {
        return Err(Error::domain(
            "consistency profile needs p >= 2 and at least one dataset",
        ));
    }
    match method {
        ProfileMethod::Direct { n_probes: 0 } => {
            return Err(Error::domain("n_probes must be positive"));
        }
        ProfileMethod::Splitting { walkers, .. } if walkers < 2 => {
            return Err(Error::domain("splitting needs at least two walkers"));
        }
        _ => {}
    }

    let per_dataset: Vec<Vec<f64>> = (0..n_datasets)
        .into_par_iter()
        .map(|d| {
            let mut data_rng = stream_rng(seed, &[TAG_DATASET, d as u64]);
            let dataset = generate_dataset(DatasetKind::Realisable, p, m, &mut data_rng)?;
            let frame = TeacherFrame::new(&dataset);
            Ok(r_grid
                .iter()
                .enumerate()
                .map(|(k, &r)| {
                    let mut rng = stream_rng(seed, &[TAG_PROBE, d as u64, k as u64]);
                    match method {
                        ProfileMethod::Direct { n_probes } => {
                            let hits = direct_successes(&frame, r, n_probes, &mut rng);
                            (hits as f64 / n_probes as f64).ln()
                        }
                        ProfileMethod::Splitting { walkers, moves } => {
                            splitting_log_fraction(&frame, r, walkers, moves, &mut rng)
                        }
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    Ok(r_grid
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let finite: Vec<f64> = per_dataset
                .iter()
                .map(|v| v[k])
                .filter(|x| x.is_finite())
                .collect();
            let n = finite.len();
            let mean = finite.iter().sum::<f64>() / n as f64;
            let var = if n > 1 {
                finite.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                f64::NAN
            };
            ConsistencyEstimate {
                r,
                mean_log_p: mean,
                var_log_p: var,
                std_error: (var / n as f64).sqrt(),
                n_datasets_used: n,
                zero_success_datasets: n_datasets - n,
            }
        })
        .collect())
}
