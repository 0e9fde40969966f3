use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub(crate) fn gaussian_vector<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Vec<f64> {
    (0..p)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Uniform draw from the unit sphere in R^p.
pub fn sample_unit_sphere<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<Vec<f64>> {
    if p < 2 {
        return Err(Error::domain(format!(
            "sphere dimension must be >= 2, got {p}"
        )));
    }
    loop {
        let mut v = gaussian_vector(p, rng);
        let n2 = dot(&v, &v);
        if n2 > 1e-300 {
            normalize(&mut v);
            return Ok(v);
        }
    }
}

/// Angle between two unit vectors, robust near 0 and π.
pub(crate) fn angle_between(u: &[f64], w: &[f64]) -> f64 {
    let c = dot(u, w);
    let s2: f64 = u.iter().zip(w).map(|(a, b)| (a - c * b).powi(2)).sum();
    s2.sqrt().atan2(c)
}
