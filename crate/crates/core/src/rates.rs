//! Trial outcomes, confusion tallies, and binomial rate inference: Beta
//! posteriors plus the Clopper-Pearson and Jeffreys interval constructions.

use crate::error::{Error, Result};
use crate::numeric::special;

/// One distinguishing trial: the true membership bit and the guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub model_id: u64,
    pub trial_id: u64,
    /// True challenge bit: `true` means the member candidate was trained on.
    pub b: bool,
    /// Adversary's guess for `b`.
    pub b_hat: bool,
}

/// Confusion counts over a batch of trials. "Positive" is the member class
/// (b = 1): `true_pos` counts b=1 guessed 1, `false_neg` counts b=1 guessed
/// 0, `false_pos` counts b=0 guessed 1, `true_neg` counts b=0 guessed 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionTally {
    pub true_pos: u64,
    pub false_neg: u64,
    pub false_pos: u64,
    pub true_neg: u64,
}

impl ConfusionTally {
    pub fn new(true_pos: u64, false_neg: u64, false_pos: u64, true_neg: u64) -> Self {
        ConfusionTally {
            true_pos,
            false_neg,
            false_pos,
            true_neg,
        }
    }

    /// Member-class trial count (b = 1).
    pub fn positives(&self) -> u64 {
        self.true_pos + self.false_neg
    }

    /// Non-member-class trial count (b = 0).
    pub fn negatives(&self) -> u64 {
        self.false_pos + self.true_neg
    }

    pub fn total(&self) -> u64 {
        self.positives() + self.negatives()
    }
}

/// Aggregates outcome records into a confusion tally. Empty input yields
/// the zero tally; the operation is permutation-invariant.
pub fn tally_from_outcomes(records: &[OutcomeRecord]) -> ConfusionTally {
    let mut t = ConfusionTally::default();
    for r in records {
        match (r.b, r.b_hat) {
            (true, true) => t.true_pos += 1,
            (true, false) => t.false_neg += 1,
            (false, true) => t.false_pos += 1,
            (false, false) => t.true_neg += 1,
        }
    }
    t
}

/// Empirical false-negative and false-positive rates.
///
/// Errors with a degenerate-input error when either class has no trials.
pub fn empirical_rates(tally: &ConfusionTally) -> Result<(f64, f64)> {
    let pos = tally.positives();
    let neg = tally.negatives();
    if pos == 0 || neg == 0 {
        return Err(Error::degenerate(format!(
            "empirical rates need trials in both classes (positives={pos}, negatives={neg})"
        )));
    }
    let fnr = tally.false_neg as f64 / pos as f64;
    let fpr = tally.false_pos as f64 / neg as f64;
    Ok((fnr, fpr))
}

/// A Beta(alpha, beta) law, used both as prior and as posterior for a rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPosterior {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaPosterior {
    /// Validates both shape parameters positive and finite.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!(
                "Beta shapes must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(BetaPosterior { alpha, beta })
    }

    /// The Jeffreys prior Beta(1/2, 1/2).
    pub fn jeffreys_prior() -> Self {
        BetaPosterior {
            alpha: 0.5,
            beta: 0.5,
        }
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Density at `x`; +∞ at an endpoint with shape < 1 never arises here
    /// because callers stay strictly inside (0, 1).
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            // Endpoint densities: 0 for shapes > 1, finite for shape = 1;
            // callers that care about sub-1 shapes never evaluate here.
            if x == 0.0 && self.alpha == 1.0 {
                return (-special::ln_beta(self.alpha, self.beta)).exp();
            }
            if x == 1.0 && self.beta == 1.0 {
                return (-special::ln_beta(self.alpha, self.beta)).exp();
            }
            return 0.0;
        }
        ((self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * (1.0 - x).ln()
            - special::ln_beta(self.alpha, self.beta))
        .exp()
    }

    /// CDF at `x` (clamped outside [0, 1]).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let v = special::betainc_raw(x.clamp(0.0, 1.0), self.alpha, self.beta);
        if v.is_nan() {
            return Err(Error::numeric(format!(
                "Beta({}, {}) CDF failed to converge at x={x}",
                self.alpha, self.beta
            )));
        }
        Ok(v)
    }

    /// Quantile function: the x with cdf(x) = p.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        special::inverse_regularized_incomplete_beta(p, self.alpha, self.beta)
    }

    /// Unchecked CDF for quadrature integrands; NaN on failure.
    pub(crate) fn cdf_raw(&self, x: f64) -> f64 {
        special::betainc_raw(x.clamp(0.0, 1.0), self.alpha, self.beta)
    }
}

/// Conjugate Beta update: observing `k` successes in `n` trials updates
/// `prior` to Beta(prior.alpha + k, prior.beta + n − k). The default prior
/// in this crate is the Jeffreys prior Beta(1/2, 1/2).
pub fn jeffreys_posterior(k: u64, n: u64, prior: &BetaPosterior) -> Result<BetaPosterior> {
    if k > n {
        return Err(Error::domain(format!(
            "successes k={k} exceed trials n={n}"
        )));
    }
    BetaPosterior::new(prior.alpha + k as f64, prior.beta + (n - k) as f64)
}

/// Which tail(s) of a rate interval carry the error budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    TwoSided,
    /// All error in the upper tail: interval [0, hi].
    UpperOneSided,
    /// All error in the lower tail: interval [lo, 1].
    LowerOneSided,
}

/// A confidence or credible interval for one rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInterval {
    pub lo: f64,
    pub hi: f64,
    pub per_rate_alpha: f64,
    pub sidedness: Sidedness,
}

fn validate_interval_args(k: u64, n: u64, per_rate_alpha: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("interval construction requires n >= 1"));
    }
    if k > n {
        return Err(Error::domain(format!(
            "successes k={k} exceed trials n={n}"
        )));
    }
    if !(per_rate_alpha > 0.0 && per_rate_alpha < 1.0) {
        return Err(Error::domain(format!(
            "per_rate_alpha must lie in (0, 1), got {per_rate_alpha}"
        )));
    }
    Ok(())
}

/// Exact (Clopper-Pearson) binomial interval from Beta quantiles.
///
/// Two-sided limits are the α/2 quantile of Beta(k, n−k+1) and the 1−α/2
/// quantile of Beta(k+1, n−k); the lower limit is 0 when k = 0 and the
/// upper limit is 1 when k = n. One-sided variants spend the whole α in a
/// single tail and clamp the other limit to 0 or 1.
pub fn clopper_pearson_interval(
    k: u64,
    n: u64,
    per_rate_alpha: f64,
    sidedness: Sidedness,
) -> Result<RateInterval> {
    validate_interval_args(k, n, per_rate_alpha)?;
    let (kf, nf) = (k as f64, n as f64);
    let lower = |tail: f64| -> Result<f64> {
        if k == 0 {
            Ok(0.0)
        } else {
            special::inverse_regularized_incomplete_beta(tail, kf, nf - kf + 1.0)
        }
    };
    let upper = |tail: f64| -> Result<f64> {
        if k == n {
            Ok(1.0)
        } else {
            special::inverse_regularized_incomplete_beta(1.0 - tail, kf + 1.0, nf - kf)
        }
    };
    let (lo, hi) = match sidedness {
        Sidedness::TwoSided => (lower(per_rate_alpha / 2.0)?, upper(per_rate_alpha / 2.0)?),
        Sidedness::UpperOneSided => (0.0, upper(per_rate_alpha)?),
        Sidedness::LowerOneSided => (lower(per_rate_alpha)?, 1.0),
    };
    Ok(RateInterval {
        lo,
        hi,
        per_rate_alpha,
        sidedness,
    })
}

/// Jeffreys interval: equal-tailed quantiles of the Beta(1/2+k, 1/2+n−k)
/// posterior, with the lower limit set to 0 when k = 0 and the upper limit
/// set to 1 when k = n.
pub fn jeffreys_interval(
    k: u64,
    n: u64,
    per_rate_alpha: f64,
    sidedness: Sidedness,
) -> Result<RateInterval> {
    validate_interval_args(k, n, per_rate_alpha)?;
    let post = jeffreys_posterior(k, n, &BetaPosterior::jeffreys_prior())?;
    let lower = |tail: f64| -> Result<f64> {
        if k == 0 {
            Ok(0.0)
        } else {
            post.quantile(tail)
        }
    };
    let upper = |tail: f64| -> Result<f64> {
        if k == n {
            Ok(1.0)
        } else {
            post.quantile(1.0 - tail)
        }
    };
    let (lo, hi) = match sidedness {
        Sidedness::TwoSided => (lower(per_rate_alpha / 2.0)?, upper(per_rate_alpha / 2.0)?),
        Sidedness::UpperOneSided => (0.0, upper(per_rate_alpha)?),
        Sidedness::LowerOneSided => (lower(per_rate_alpha)?, 1.0),
    };
    Ok(RateInterval {
        lo,
        hi,
        per_rate_alpha,
        sidedness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(b: u8, b_hat: u8) -> OutcomeRecord {
        OutcomeRecord {
            model_id: 0,
            trial_id: 0,
            b: b == 1,
            b_hat: b_hat == 1,
        }
    }

    #[test]
    fn tally_counts_all_cells() {
        let t = tally_from_outcomes(&[rec(1, 1)]);
        assert_eq!(t, ConfusionTally::new(1, 0, 0, 0));
        let t = tally_from_outcomes(&[rec(1, 0), rec(0, 1), rec(0, 0), rec(1, 1)]);
        assert_eq!(t, ConfusionTally::new(1, 1, 1, 1));
        assert_eq!(tally_from_outcomes(&[]), ConfusionTally::default());
    }

    #[test]
    fn tally_is_permutation_invariant() {
        let mut records = vec![rec(1, 0), rec(0, 1), rec(0, 0), rec(1, 1), rec(1, 1)];
        let before = tally_from_outcomes(&records);
        records.reverse();
        records.swap(0, 3);
        assert_eq!(before, tally_from_outcomes(&records));
    }

    #[test]
    fn empirical_rates_examples() {
        let (fnr, fpr) = empirical_rates(&ConfusionTally::new(65, 35, 25, 75)).unwrap();
        assert!((fnr - 0.35).abs() < 1e-15);
        assert!((fpr - 0.25).abs() < 1e-15);
        let (fnr, fpr) = empirical_rates(&ConfusionTally::new(1, 0, 0, 1)).unwrap();
        assert_eq!((fnr, fpr), (0.0, 0.0));
        let (fnr, fpr) = empirical_rates(&ConfusionTally::new(0, 10, 0, 10)).unwrap();
        assert_eq!((fnr, fpr), (1.0, 0.0));
    }

    #[test]
    fn empirical_rates_degenerate() {
        let err = empirical_rates(&ConfusionTally::new(0, 0, 3, 4)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        let err = empirical_rates(&ConfusionTally::new(1, 1, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn posterior_update_examples() {
        let prior = BetaPosterior::jeffreys_prior();
        let p = jeffreys_posterior(0, 1000, &prior).unwrap();
        assert_eq!((p.alpha, p.beta), (0.5, 1000.5));
        let p = jeffreys_posterior(35, 100, &prior).unwrap();
        assert_eq!((p.alpha, p.beta), (35.5, 65.5));
        let custom = BetaPosterior::new(2.0, 3.0).unwrap();
        let p = jeffreys_posterior(0, 0, &custom).unwrap();
        assert_eq!((p.alpha, p.beta), (2.0, 3.0));
        assert!(jeffreys_posterior(5, 4, &prior).is_err());
    }

    #[test]
    fn beta_posterior_density_and_cdf_consistency() {
        let p = BetaPosterior::new(35.5, 65.5).unwrap();
        assert!((p.mean() - 35.5 / 101.0).abs() < 1e-15);
        // CDF at the mean should be near 1/2 for a mildly skewed Beta.
        let c = p.cdf(p.mean()).unwrap();
        assert!((c - 0.5).abs() < 0.05, "cdf at mean = {c}");
        // Quantile round trip.
        let q = p.quantile(0.8).unwrap();
        assert!((p.cdf(q).unwrap() - 0.8).abs() < 1e-9);
    }

    #[test]
    fn cp_closed_form_for_zero_successes() {
        // Upper limit with k=0 is 1 - (alpha/2)^(1/n).
        let iv = clopper_pearson_interval(0, 1000, 0.05, Sidedness::TwoSided).unwrap();
        assert_eq!(iv.lo, 0.0);
        let expect = 1.0 - 0.025_f64.powf(1.0 / 1000.0);
        assert!(
            (iv.hi - expect).abs() < 1e-9,
            "hi={}, closed form={expect}",
            iv.hi
        );
        assert!((expect - 0.0036817).abs() < 1e-6);
    }

    #[test]
    fn cp_full_success_and_failure_edges() {
        let iv = clopper_pearson_interval(10, 10, 0.1, Sidedness::TwoSided).unwrap();
        assert_eq!(iv.hi, 1.0);
        assert!(iv.lo > 0.0 && iv.lo < 1.0);
        let iv = clopper_pearson_interval(0, 10, 0.1, Sidedness::LowerOneSided).unwrap();
        assert_eq!((iv.lo, iv.hi), (0.0, 1.0));
    }

    #[test]
    fn jeffreys_one_sided_upper_anchor() {
        // k=0, n=1000, alpha=0.05 one-sided: the 0.95 quantile of
        // Beta(0.5, 1000.5).
        let iv = jeffreys_interval(0, 1000, 0.05, Sidedness::UpperOneSided).unwrap();
        assert_eq!(iv.lo, 0.0);
        assert!(
            (iv.hi - 0.0019184067122560312).abs() < 1e-9,
            "hi = {}",
            iv.hi
        );
    }

    #[test]
    fn jeffreys_edge_rules() {
        let iv = jeffreys_interval(0, 50, 0.1, Sidedness::TwoSided).unwrap();
        assert_eq!(iv.lo, 0.0, "k=0 forces the lower limit to 0");
        let iv = jeffreys_interval(50, 50, 0.1, Sidedness::TwoSided).unwrap();
        assert_eq!(iv.hi, 1.0, "k=n forces the upper limit to 1");
    }

    #[test]
    fn cp_contains_jeffreys_and_both_contain_point_estimate() {
        for &(k, n) in &[(35u64, 100u64), (1, 30), (250, 500), (97, 100)] {
            for &alpha in &[0.05, 0.1, 0.2] {
                let cp = clopper_pearson_interval(k, n, alpha, Sidedness::TwoSided).unwrap();
                let jf = jeffreys_interval(k, n, alpha, Sidedness::TwoSided).unwrap();
                let width_cp = cp.hi - cp.lo;
                let width_jf = jf.hi - jf.lo;
                assert!(
                    width_cp >= width_jf - 1e-12,
                    "CP narrower than Jeffreys at k={k}, n={n}, alpha={alpha}"
                );
                let hat = k as f64 / n as f64;
                assert!(cp.lo <= hat && hat <= cp.hi);
                assert!(jf.lo <= hat && hat <= jf.hi);
            }
        }
    }

    #[test]
    fn interval_argument_validation() {
        assert!(clopper_pearson_interval(0, 0, 0.1, Sidedness::TwoSided).is_err());
        assert!(clopper_pearson_interval(5, 4, 0.1, Sidedness::TwoSided).is_err());
        assert!(clopper_pearson_interval(1, 4, 0.0, Sidedness::TwoSided).is_err());
        assert!(jeffreys_interval(1, 4, 1.0, Sidedness::TwoSided).is_err());
    }
}
