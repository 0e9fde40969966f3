use std::cmp::Ordering;
use std::ops::{Add, Mul};

/// A nonnegative quantity stored as its natural logarithm.
///
/// Values such as B(a, b+m) for m = 10⁶ sit far below the smallest positive
/// double; here they are ordinary finite numbers. Zero is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_log(log_magnitude: f64) -> Self {
        LogValue(log_magnitude)
    }

    /// Panics on negative input.
    pub fn from_value(x: f64) -> Self {
        assert!(x >= 0.0, "LogValue requires a nonnegative value, got {x}");
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn powf(self, k: f64) -> Self {
        if k == 0.0 {
            LogValue::ONE
        } else {
            LogValue(self.0 * k)
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        let (hi, lo) = if self.0 >= rhs.0 {
            (self.0, rhs.0)
        } else {
            (rhs.0, self.0)
        };
        if hi == f64::NEG_INFINITY {
            return LogValue::ZERO;
        }
        if hi == f64::INFINITY {
            return LogValue(f64::INFINITY);
        }
        LogValue(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogValue) -> LogValue {
        // Products of values are sums of logs.
        LogValue(self.0 + rhs.0)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let logs: Vec<f64> = iter.map(LogValue::ln).collect();
        LogValue(log_sum_exp(&logs))
    }
}

/// ln Σ exp(xᵢ), shifted by the maximum so it never overflows.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_values_add() {
        let a = LogValue::from_log(-1.0e6);
        let b = LogValue::from_log(-1.0e6);
        let s = a + b;
        assert!((s.ln() - (-1.0e6 + std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn zero_is_additive_identity() {
        let a = LogValue::from_value(3.5);
        assert_eq!((a + LogValue::ZERO).ln(), a.ln());
        assert_eq!((LogValue::ZERO + LogValue::ZERO).ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn sum_never_overflows() {
        let xs = [700.0, 709.0, 710.0, -1e300];
        let s = log_sum_exp(&xs);
        assert!(s.is_finite() && s > 710.0);
        let total: LogValue = xs.iter().map(|&x| LogValue::from_log(x)).sum();
        assert_eq!(total.ln(), s);
    }
}
