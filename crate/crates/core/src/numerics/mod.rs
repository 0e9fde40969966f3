//! Numerical building blocks shared by every model.

mod logvalue;
mod optimize;
mod quadrature;
mod special;

pub use logvalue::{log_sum_exp, LogValue};
pub use optimize::maximize_unimodal;
pub use quadrature::{
    integrate, integrate_log, LogQuadratureResult, QuadratureOptions, QuadratureResult,
};
pub use special::{digamma, log_beta, log_gamma, normal_cdf, normal_quantile, reg_inc_beta};

pub(crate) use special::{
    ln_beta, ln_choose, ln_inc_beta_pair, ln_one_minus_exp, normal_quantile_unchecked, psi,
};

/// `k · ln(x)` with the convention 0 · ln 0 = 0.
pub(crate) fn xlogy(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln()
    }
}

/// `k · ln(1 + x)` with the convention 0 · ln 0 = 0.
pub(crate) fn xlog1py(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln_1p()
    }
}
