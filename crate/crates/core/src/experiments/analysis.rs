//! Analysis drivers built on the estimators and the game protocols:
//! deterministic expected tallies, sample-size sweeps, and interval
//! coverage experiments.

use super::adversary::AdversarySpec;
use super::mechanisms::Mechanism;
use super::protocol::run_ind_mia;
use super::{stream_seed, StreamTag};
use crate::error::{Error, Result};
use crate::inference::{ci_epsilon_interval, credible_interval, CiFamily};
use crate::rates::{BetaPosterior, ConfusionTally};

/// Deterministic tally of a balanced attack at a fixed accuracy: half the
/// trials in each class, with tp = tn = round(accuracy · n_total / 2) and
/// the errors filling the rest. No sampling — these are expected counts.
pub fn expected_tally(accuracy: f64, n_total: u64) -> Result<ConfusionTally> {
    if !(accuracy > 0.0 && accuracy <= 1.0) {
        return Err(Error::domain(format!(
            "accuracy must lie in (0, 1], got {accuracy}"
        )));
    }
    if n_total == 0 || !n_total.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "n_total must be even and positive to split across classes, got {n_total}"
        )));
    }
    let half = n_total / 2;
    let correct = (accuracy * half as f64).round() as u64;
    let correct = correct.min(half);
    let wrong = half - correct;
    Ok(ConfusionTally::new(correct, wrong, wrong, correct))
}

/// One row of a sample-size sweep: interval widths at a given total N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_total: u64,
    pub bayesian_width: f64,
    pub jeffreys_width: f64,
    pub clopper_pearson_width: f64,
}

/// Result of a sample-size sweep: the width-vs-N table and, per method,
/// the first N on the grid whose width reaches the target (None when the
/// target is never reached).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub target_width: f64,
    pub rows: Vec<SweepRow>,
    pub bayesian_min_n: Option<u64>,
    pub jeffreys_min_n: Option<u64>,
    pub clopper_pearson_min_n: Option<u64>,
}

/// Sweeps total sample counts at a fixed attack accuracy: for each N in
/// the ascending grid, builds the expected tally, computes the Bayesian
/// credible interval and both CI-derived intervals at level `alpha`, and
/// records their widths and the minimal N reaching `target_width`.
pub fn sample_size_sweep(
    accuracy: f64,
    delta: f64,
    alpha: f64,
    target_width: f64,
    n_grid: &[u64],
) -> Result<SweepReport> {
    if n_grid.is_empty() {
        return Err(Error::domain("the sweep grid must be nonempty"));
    }
    if !n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("the sweep grid must be strictly ascending"));
    }
    if target_width <= 0.0 || target_width.is_nan() {
        return Err(Error::domain(format!(
            "target_width must be positive, got {target_width}"
        )));
    }
    let prior = BetaPosterior::jeffreys_prior();
    let mut rows = Vec::with_capacity(n_grid.len());
    let mut report = SweepReport {
        target_width,
        rows: Vec::new(),
        bayesian_min_n: None,
        jeffreys_min_n: None,
        clopper_pearson_min_n: None,
    };
    for &n_total in n_grid {
        let tally = expected_tally(accuracy, n_total)?;
        let bayes = credible_interval(&tally, delta, alpha, &prior)?.width();
        let jeff = ci_epsilon_interval(&tally, delta, alpha, CiFamily::Jeffreys)?.width();
        let cp = ci_epsilon_interval(&tally, delta, alpha, CiFamily::ClopperPearson)?.width();
        if bayes <= target_width && report.bayesian_min_n.is_none() {
            report.bayesian_min_n = Some(n_total);
        }
        if jeff <= target_width && report.jeffreys_min_n.is_none() {
            report.jeffreys_min_n = Some(n_total);
        }
        if cp <= target_width && report.clopper_pearson_min_n.is_none() {
            report.clopper_pearson_min_n = Some(n_total);
        }
        rows.push(SweepRow {
            n_total,
            bayesian_width: bayes,
            jeffreys_width: jeff,
            clopper_pearson_width: cp,
        });
    }
    report.rows = rows;
    Ok(report)
}

/// Repeated-game calibration check: runs `reps` independent replicates of
/// the one-sample game, computes the Bayesian credible interval for each
/// replicate's tally, and returns the fraction of replicates whose
/// interval is consistent with the mechanism's stated ε.
///
/// For randomized response with the optimal adversary the attack's true
/// distinguishing ε equals the mechanism's, so consistency is two-sided
/// containment. For the gaussian mechanism the stated ε is only an upper
/// bound on the truth, so consistency is the one-sided check that the
/// interval's lower end does not exceed it.
pub fn coverage_experiment(
    mech: &Mechanism,
    adv: &AdversarySpec,
    trials_per_rep: u64,
    reps: u64,
    delta: f64,
    alpha: f64,
    seed: u64,
) -> Result<f64> {
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }
    mech.validate()?;
    let (eps_true, one_sided) = match *mech {
        Mechanism::RandomizedResponse { eps_true } => (eps_true, false),
        Mechanism::GaussianMean { eps, .. } => (eps, true),
    };
    let prior = BetaPosterior::jeffreys_prior();
    let mut hits = 0u64;
    for rep in 0..reps {
        let rep_seed = stream_seed(seed, StreamTag::Rep, rep);
        let report = run_ind_mia(mech, adv, trials_per_rep, rep_seed)?;
        let interval = credible_interval(&report.tally, delta, alpha, &prior)?;
        let hit = if one_sided {
            interval.lo <= eps_true
        } else {
            interval.contains(eps_true)
        };
        if hit {
            hits += 1;
        }
    }
    Ok(hits as f64 / reps as f64)
}
