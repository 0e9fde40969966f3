//! Expected empirical-risk-minimisation (ERM) generalisation curves computed
//! from a distribution of risks ρ(r).
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: special functions, log-space quadrature, 1-D maximisation.
//! - [`risk_models`]: the ρ(r) family (β-Risk, all Boolean functions,
//!   realisable and unrealisable perceptron).
//! - [`classification`]: annealed ERM risk for 0/1 loss, finite and infinite
//!   hypothesis spaces, plus the exact realisable formula in terms of M0/M1.
//! - [`regression`]: the γ-Precision squared-loss model.
//! - [`corrections`]: data-set fluctuation corrections for the realisable
//!   perceptron and the large-p limit curves.
//! - [`pac`]: sample-complexity bounds, posterior tails and attunement fits.
//! - [`montecarlo`]: Gibbs-learning simulation used as an independent oracle.
//! - [`curve`]: the `(x, y)` record every curve-producing operation returns.

// Constants keep their published digits; `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod classification;
pub mod corrections;
pub mod curve;
mod error;
pub mod montecarlo;
pub mod numerics;
pub mod pac;
pub mod regression;
pub mod risk_models;

pub use classification::{ClassificationScenario, HypothesisCount, LossPmf};
pub use curve::Curve;
pub use error::{Error, Result};
pub use risk_models::{BetaApprox, RiskDistribution};
