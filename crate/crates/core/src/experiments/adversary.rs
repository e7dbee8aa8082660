//! Attack strategies for the distinguishing games.

use crate::error::{Error, Result};

/// How the loss-threshold adversary chooses challenge pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRegime {
    /// Pairs drawn uniformly from the dataset without replacement.
    AverageCase,
    /// Pairs taken from the examples whose in/out loss gap is largest
    /// across a pilot batch of trainings on random splits.
    WorstCase,
}

/// The adversary's guessing strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdversarySpec {
    /// The likelihood-ratio test against randomized response: guess the
    /// released bit itself. Attains FNR = FPR = 1/(1+e^ε).
    OptimalRr,
    /// Model-dependent threshold rule: guess "member" when the challenge's
    /// loss score sits at or below the alpha_pct-percentile of a reference
    /// score population drawn fresh for each model.
    LossThreshold {
        alpha_pct: f64,
        regime: ThresholdRegime,
    },
}

impl AdversarySpec {
    pub fn loss_threshold(alpha_pct: f64, regime: ThresholdRegime) -> Result<Self> {
        let adv = AdversarySpec::LossThreshold { alpha_pct, regime };
        adv.validate()?;
        Ok(adv)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AdversarySpec::OptimalRr => Ok(()),
            AdversarySpec::LossThreshold { alpha_pct, .. } => check_alpha_pct(alpha_pct),
        }
    }
}

fn check_alpha_pct(alpha_pct: f64) -> Result<()> {
    if !alpha_pct.is_finite() || !(alpha_pct > 0.0 && alpha_pct < 100.0) {
        return Err(Error::domain(format!(
            "alpha_pct must lie strictly inside (0, 100), got {alpha_pct}"
        )));
    }
    Ok(())
}

/// Percentile with linear interpolation between order statistics:
/// rank h = (len − 1) · pct / 100 into the sorted sample.
fn percentile_linear(sorted: &[f64], pct: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * pct / 100.0;
    let i = h.floor() as usize;
    let frac = h - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Threshold attack: sets τ to the alpha_pct-percentile (linear
/// interpolation) of the reference scores and guesses "member" for every
/// challenge whose score is ≤ τ. The guess set is monotone in alpha_pct.
pub fn percentile_threshold_attack(
    member_scores: &[f64],
    reference_scores: &[f64],
    alpha_pct: f64,
) -> Result<Vec<bool>> {
    if reference_scores.is_empty() {
        return Err(Error::degenerate("the reference score population is empty"));
    }
    check_alpha_pct(alpha_pct)?;
    if member_scores
        .iter()
        .chain(reference_scores.iter())
        .any(|s| s.is_nan())
    {
        return Err(Error::domain("scores must not be NaN"));
    }
    let mut sorted = reference_scores.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tau = percentile_linear(&sorted, alpha_pct);
    Ok(member_scores.iter().map(|&s| s <= tau).collect())
}

/// Linear search over threshold percentiles: evaluates each candidate with
/// the supplied scorer (the lower-bound estimate it achieves) and returns
/// the candidate with the largest score, breaking ties toward the smaller
/// alpha. The chosen alpha is meant to be held fixed afterwards.
pub fn calibrate_alpha<F>(candidate_alphas: &[f64], mut evaluation: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if candidate_alphas.is_empty() {
        return Err(Error::domain(
            "calibrate_alpha needs at least one candidate",
        ));
    }
    let mut best: Option<(f64, f64)> = None;
    for &alpha in candidate_alphas {
        check_alpha_pct(alpha)?;
        let score = evaluation(alpha)?;
        if score.is_nan() {
            return Err(Error::numeric("calibration evaluation produced NaN"));
        }
        best = Some(match best {
            None => (alpha, score),
            Some((best_alpha, best_score)) => {
                if score > best_score || (score == best_score && alpha < best_alpha) {
                    (alpha, score)
                } else {
                    (best_alpha, best_score)
                }
            }
        });
    }
    Ok(best.expect("nonempty candidate list").0)
}
