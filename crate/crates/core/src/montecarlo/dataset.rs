use rand::Rng;
use rand_distr::StandardNormal;

use super::sphere::{dot, sample_unit_sphere};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DatasetKind {
    /// x ~ N(0, I), y = sgn(x·w*).
    Realisable,
    /// y = ±1 with equal probability, x ~ N(Δ y w*, I).
    Unrealisable { delta: f64 },
}

/// m labelled examples in R^p together with the teacher that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub p: usize,
    /// Row-major m × p.
    pub features: Vec<f64>,
    pub labels: Vec<f64>,
    pub teacher: Vec<f64>,
    pub kind: DatasetKind,
}

impl Dataset {
    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.p..(i + 1) * self.p]
    }

    /// Rows scaled by their labels, y·x, so that w is consistent iff every
    /// entry of A w is positive.
    pub fn signed_rows(&self) -> Vec<f64> {
        let mut a = self.features.clone();
        for (i, &y) in self.labels.iter().enumerate() {
            a[i * self.p..(i + 1) * self.p]
                .iter_mut()
                .for_each(|v| *v *= y);
        }
        a
    }

    /// Number of examples misclassified by w.
    pub fn training_errors(&self, w: &[f64]) -> usize {
        (0..self.m())
            .filter(|&i| self.labels[i] * dot(self.row(i), w) <= 0.0)
            .count()
    }

    /// The first `m` examples as a dataset of their own.
    pub fn prefix(&self, m: usize) -> Dataset {
        let m = m.min(self.m());
        Dataset {
            p: self.p,
            features: self.features[..m * self.p].to_vec(),
            labels: self.labels[..m].to_vec(),
            teacher: self.teacher.clone(),
            kind: self.kind,
        }
    }
}

/// Draws a teacher and then m examples, one row at a time, so that datasets
/// of different sizes drawn from the same stream share their prefixes.
pub fn generate_dataset<R: Rng + ?Sized>(
    kind: DatasetKind,
    p: usize,
    m: usize,
    rng: &mut R,
) -> Result<Dataset> {
    if p < 2 {
        return Err(Error::domain(format!(
            "dataset dimension must be >= 2, got {p}"
        )));
    }
    if let DatasetKind::Unrealisable { delta } = kind {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!(
                "delta must be positive, got {delta}"
            )));
        }
    }
    let teacher = sample_unit_sphere(p, rng)?;
    let mut features = Vec::with_capacity(m * p);
    let mut labels = Vec::with_capacity(m);
    for _ in 0..m {
        match kind {
            DatasetKind::Realisable => {
                let start = features.len();
                features.extend((0..p).map(|_| rng.sample::<f64, _>(StandardNormal)));
                let s = dot(&features[start..], &teacher);
                labels.push(if s >= 0.0 { 1.0 } else { -1.0 });
            }
            DatasetKind::Unrealisable { delta } => {
                let y = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                features.extend(
                    teacher
                        .iter()
                        .map(|&t| delta * y * t + rng.sample::<f64, _>(StandardNormal)),
                );
                labels.push(y);
            }
        }
    }
    Ok(Dataset {
        p,
        features,
        labels,
        teacher,
        kind,
    })
}
