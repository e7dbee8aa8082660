//! Empirical differential-privacy estimation from attack outcomes.
//!
//! Given the confusion counts of a membership-distinguishing attack, this
//! crate turns the attack's false-negative and false-positive rates into
//! interval estimates of the privacy parameter ε at a stated δ:
//!
//! * **CI-derived baselines** — exact Clopper-Pearson or near-nominal
//!   Jeffreys confidence intervals on each rate, pushed through the
//!   pointwise ε bound with a union-bound confidence budget
//!   ([`ci_epsilon_interval`], [`ci_epsilon_lower_bound`]).
//! * **The joint posterior** — independent Beta posteriors on the two
//!   rates, pushed through the privacy-region geometry to the full
//!   posterior law of ε̂ ([`EpsilonDistribution`]): CDF, density, point
//!   mass at zero, quantiles, and equal-tailed credible intervals
//!   ([`credible_interval`]), which are markedly narrower than the
//!   baselines at the same level.
//! * **A simulation harness** — distinguishing games against synthetic
//!   mechanisms with known guarantees (randomized response, noisy clipped
//!   means), threshold attacks, coverage experiments, and sample-size
//!   sweeps ([`experiments`]).
//!
//! The numerical core (log-beta, regularized incomplete beta and its
//! inverse, breakpoint-aware adaptive quadrature) is self-contained in
//! [`numeric`].

pub mod error;
pub mod experiments;
pub mod inference;
pub mod numeric;
pub mod rates;
pub mod region;

pub use error::{Error, Result};
pub use inference::{
    ci_epsilon_interval, ci_epsilon_lower_bound, credible_interval, credible_interval_with_cap,
    epsilon_cdf, epsilon_pdf, epsilon_quantile, joint_posterior, rectangle_mass, ring_mass,
    CiFamily, EpsilonDistribution, EpsilonInterval, IntervalMethod, JointRatePosterior,
    DEFAULT_EPS_CAP,
};
pub use numeric::{
    adaptive_integrate, inverse_regularized_incomplete_beta, log_beta_fn,
    regularized_incomplete_beta, tanh_sinh, QuadratureSpec,
};
pub use rates::{
    clopper_pearson_interval, empirical_rates, jeffreys_interval, jeffreys_posterior,
    tally_from_outcomes, BetaPosterior, ConfusionTally, OutcomeRecord, RateInterval, Sidedness,
};
pub use region::{
    advantage_bound, epsilon_lower_bound_point, in_region, mia_advantage, region_band,
    PrivacyParams, RatePoint,
};
