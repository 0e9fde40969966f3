use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Ordered `(x, y)` points with free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    pub metadata: BTreeMap<String, String>,
}

impl Curve {
    pub fn new(x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Curve {
            x_label: x_label.into(),
            y_label: y_label.into(),
            points: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks that x is strictly increasing and every coordinate is finite.
    pub fn validate(&self) -> Result<()> {
        for (i, &(x, y)) in self.points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::domain(format!(
                    "curve point {i} is not finite: ({x}, {y})"
                )));
            }
            if i > 0 && x <= self.points[i - 1].0 {
                return Err(Error::domain(format!(
                    "curve x values not strictly increasing at {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Rejects empty or non-increasing integer grids.
pub(crate) fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    Ok(())
}

/// Wraps a per-point error with the index of the failing point.
pub(crate) fn collect_points<I>(results: I) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = Result<f64>>,
{
    results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::CurvePoint {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_bad_points() {
        let mut c = Curve::new("m", "risk");
        c.points = vec![(0.0, 1.0), (1.0, 0.5)];
        assert!(c.validate().is_ok());
        c.points.push((1.0, 0.4));
        assert!(c.validate().is_err());
        c.points = vec![(0.0, f64::NAN)];
        assert!(c.validate().is_err());
    }

    #[test]
    fn errors_carry_index() {
        let r = collect_points(vec![Ok(1.0), Err(Error::domain("x")), Ok(2.0)]);
        match r {
            Err(Error::CurvePoint { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_grid(&[1, 2, 2]).is_err());
        assert!(check_grid(&[]).is_err());
        assert!(check_grid(&[0, 5]).is_ok());
    }
}
