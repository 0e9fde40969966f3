//! Uniform sampling from the version space of a realisable dataset.

use rand::Rng;

use super::dataset::{Dataset, DatasetKind};
use super::sphere::{dot, gaussian_vector, normalize, sample_unit_sphere};
use super::truncnorm::sample_truncated_std_normal;
use crate::error::{Error, Result};

fn require_realisable(dataset: &Dataset) -> Result<()> {
    match dataset.kind {
        DatasetKind::Realisable => Ok(()),
        DatasetKind::Unrealisable { .. } => Err(Error::unsupported(
            "Gibbs sampling of the version space needs a realisable dataset",
        )),
    }
}

fn consistent(signed_rows: &[f64], p: usize, w: &[f64]) -> bool {
    signed_rows.chunks_exact(p).all(|row| dot(row, w) > 0.0)
}

/// Draws uniform unit vectors until one classifies every example correctly.
///
/// Returns `Ok(None)` when `max_tries` draws all fail.
pub fn sample_erm_hypothesis<R: Rng + ?Sized>(
    dataset: &Dataset,
    rng: &mut R,
    max_tries: u64,
) -> Result<Option<Vec<f64>>> {
    require_realisable(dataset)?;
    let a = dataset.signed_rows();
    for _ in 0..max_tries {
        let w = sample_unit_sphere(dataset.p, rng)?;
        if consistent(&a, dataset.p, &w) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Number of uniform draws, out of `draws`, that are consistent with the data.
pub fn count_consistent<R: Rng + ?Sized>(
    dataset: &Dataset,
    draws: u64,
    rng: &mut R,
) -> Result<u64> {
    let a = dataset.signed_rows();
    let mut hits = 0;
    for _ in 0..draws {
        let w = sample_unit_sphere(dataset.p, rng)?;
        if consistent(&a, dataset.p, &w) {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Hit-and-run chain on a standard Gaussian restricted to the version-space
/// cone {z : y·x·z > 0 for every example}.
///
/// The direction z/|z| of a Gaussian restricted to a cone is uniform on the
/// cone's intersection with the sphere, so the normalised states are draws
/// from the Gibbs posterior. Each move picks a random line through the current
/// state and samples the exact truncated normal along it.
#[derive(Debug, Clone)]
pub struct VersionSpaceChain {
    p: usize,
    signed_rows: Vec<f64>,
    z: Vec<f64>,
    margins: Vec<f64>,
    steps: u64,
}

/// Margins are recomputed from scratch this often to stop round-off drift.
const REFRESH_EVERY: u64 = 64;

impl VersionSpaceChain {
    /// Starts at the teacher, which is always inside the version space.
    pub fn new(dataset: &Dataset) -> Result<Self> {
        require_realisable(dataset)?;
        let p = dataset.p;
        let scale = (p as f64).sqrt();
        let z: Vec<f64> = dataset.teacher.iter().map(|t| t * scale).collect();
        let signed_rows = dataset.signed_rows();
        let margins: Vec<f64> = signed_rows
            .chunks_exact(p)
            .map(|row| dot(row, &z))
            .collect();
        if margins.iter().any(|&c| c <= 0.0) {
            return Err(Error::domain(
                "teacher lies on an example's decision boundary",
            ));
        }
        Ok(VersionSpaceChain {
            p,
            signed_rows,
            z,
            margins,
            steps: 0,
        })
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let p = self.p;
        let mut d = gaussian_vector(p, rng);
        normalize(&mut d);
        let slopes: Vec<f64> = self
            .signed_rows
            .chunks_exact(p)
            .map(|row| dot(row, &d))
            .collect();
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (&c, &e) in self.margins.iter().zip(&slopes) {
            if e > 0.0 {
                lo = lo.max(-c / e);
            } else if e < 0.0 {
                hi = hi.min(-c / e);
            }
        }
        // Along z + t d the Gaussian density is N(t | −z·d, 1).
        let centre = -dot(&self.z, &d);
        if !(hi - lo > 0.0) {
            return;
        }
        let t = centre + sample_truncated_std_normal(lo - centre, hi - centre, rng);
        let new_margins: Vec<f64> = self
            .margins
            .iter()
            .zip(&slopes)
            .map(|(c, e)| c + t * e)
            .collect();
        if new_margins.iter().any(|&c| c <= 0.0) {
            return;
        }
        self.z.iter_mut().zip(&d).for_each(|(z, di)| *z += t * di);
        self.margins = new_margins;
        self.steps += 1;
        if self.steps.is_multiple_of(REFRESH_EVERY) {
            self.margins = self
                .signed_rows
                .chunks_exact(p)
                .map(|row| dot(row, &self.z))
                .collect();
        }
    }

    /// Current state projected onto the unit sphere.
    pub fn direction(&self) -> Vec<f64> {
        let mut w = self.z.clone();
        normalize(&mut w);
        w
    }

    /// Runs `burn_in` moves, then returns `n` states spaced `thin` moves apart.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        n: usize,
        burn_in: usize,
        thin: usize,
        rng: &mut R,
    ) -> Vec<Vec<f64>> {
        for _ in 0..burn_in {
            self.step(rng);
        }
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            for _ in 0..thin.max(1) {
                self.step(rng);
            }
            out.push(self.direction());
        }
        out
    }
}
