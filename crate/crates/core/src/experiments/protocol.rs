//! The distinguishing-game protocols: the one-sample-per-model game and
//! its multi-sample generalization.

use rand::Rng;

use super::adversary::{percentile_threshold_attack, AdversarySpec, ThresholdRegime};
use super::mechanisms::{standard_normal_vec, Dataset, Mechanism};
use super::{stream, ExperimentConfig, SimulationReport, StreamTag};
use crate::error::{Error, Result};
use crate::rates::{tally_from_outcomes, OutcomeRecord};

/// Dataset size used by [`run_ind_mia`] for mechanisms that train on data.
pub const DEFAULT_GAME_N: u64 = 100;

/// Reference scores drawn per model to place the attack threshold.
const REFERENCE_POINTS: usize = 200;

/// Pilot trainings per model used by worst-case challenge selection.
const PILOT_MODELS: u64 = 4;

/// One-sample distinguishing game: `trials` independent rounds, each with
/// a fresh challenge, a fair membership bit, one training run, and one
/// guess. Equivalent to the multi-sample game with m = 1, and implemented
/// as exactly that.
pub fn run_ind_mia(
    mech: &Mechanism,
    adv: &AdversarySpec,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let cfg = ExperimentConfig {
        m: 1,
        n_models: trials,
        n: DEFAULT_GAME_N,
        seed,
    };
    run_mia_m(mech, adv, &cfg)
}

/// Multi-sample distinguishing game: each of `cfg.n_models` models carries
/// `cfg.m` challenge slots with independent fair bits; the mechanism
/// trains once per model on the base data plus the selected challenge
/// points, and the adversary guesses each slot given only its own pair.
///
/// Everything is keyed to the master seed through named streams, and
/// slot-level randomness is keyed to the global slot index
/// g = model · m + trial: regrouping N = m · n_models slots under a
/// different m leaves every per-slot stream in place. Runs are therefore
/// bit-reproducible and independent of evaluation order.
pub fn run_mia_m(
    mech: &Mechanism,
    adv: &AdversarySpec,
    cfg: &ExperimentConfig,
) -> Result<SimulationReport> {
    cfg.validate()?;
    mech.validate()?;
    adv.validate()?;
    let records = match (mech, adv) {
        (Mechanism::RandomizedResponse { .. }, AdversarySpec::OptimalRr) => rr_records(mech, cfg)?,
        (Mechanism::GaussianMean { .. }, AdversarySpec::LossThreshold { alpha_pct, regime }) => {
            gaussian_records(mech, *alpha_pct, *regime, cfg)?
        }
        (Mechanism::RandomizedResponse { .. }, AdversarySpec::LossThreshold { .. }) => {
            return Err(Error::domain(
                "the loss-threshold adversary needs a mechanism with a loss surface; \
                 randomized response admits the optimal-rr adversary",
            ))
        }
        (Mechanism::GaussianMean { .. }, AdversarySpec::OptimalRr) => {
            return Err(Error::domain(
                "the optimal-rr adversary is specific to randomized response",
            ))
        }
    };
    let tally = tally_from_outcomes(&records);
    Ok(SimulationReport {
        config: *cfg,
        records,
        tally,
    })
}

/// Randomized-response game: the model releases each challenge bit through
/// the (ε, 0)-DP channel and the optimal adversary guesses the released
/// bit. Each slot spends exactly its own two streams (bit and noise).
fn rr_records(mech: &Mechanism, cfg: &ExperimentConfig) -> Result<Vec<OutcomeRecord>> {
    let mut train_rng = stream(cfg.seed, StreamTag::ModelTrain, 0);
    let channel = mech.train(&Dataset::Bits(Vec::new()), &mut train_rng)?;
    let mut records = Vec::with_capacity(cfg.total_samples() as usize);
    for model in 0..cfg.n_models {
        for trial in 0..cfg.m {
            let slot = model * cfg.m + trial;
            let b: bool = stream(cfg.seed, StreamTag::SlotBit, slot).gen();
            let released =
                channel.release_bit(b, &mut stream(cfg.seed, StreamTag::SlotNoise, slot))?;
            records.push(OutcomeRecord {
                model_id: model,
                trial_id: trial,
                b,
                b_hat: released,
            });
        }
    }
    Ok(records)
}

/// Gaussian-mean game with the loss-threshold adversary. Per model: draw a
/// dataset of n points, select 2m distinct challenge candidates (pairing
/// them up), flip a fair bit per pair to pick which candidate joins the
/// training set, train once on the n − m surviving points, then guess
/// membership of each pair's scored candidate against the percentile
/// threshold of a fresh reference population.
fn gaussian_records(
    mech: &Mechanism,
    alpha_pct: f64,
    regime: ThresholdRegime,
    cfg: &ExperimentConfig,
) -> Result<Vec<OutcomeRecord>> {
    let Mechanism::GaussianMean { dimension, .. } = *mech else {
        unreachable!("caller matched the mechanism variant");
    };
    if cfg.n < 2 * cfg.m {
        return Err(Error::domain(format!(
            "the gaussian-mean game needs n >= 2m to carve out challenge pairs \
             (n = {}, m = {})",
            cfg.n, cfg.m
        )));
    }
    let m = cfg.m as usize;
    let n = cfg.n as usize;
    let mut records = Vec::with_capacity(cfg.total_samples() as usize);
    for model in 0..cfg.n_models {
        let mut data_rng = stream(cfg.seed, StreamTag::ModelData, model);
        let dataset: Vec<Vec<f64>> = (0..n)
            .map(|_| standard_normal_vec(dimension, &mut data_rng))
            .collect();
        let candidates = match regime {
            ThresholdRegime::AverageCase => {
                rand::seq::index::sample(&mut data_rng, n, 2 * m).into_vec()
            }
            ThresholdRegime::WorstCase => {
                worst_case_candidates(mech, &dataset, 2 * m, cfg.seed, model)?
            }
        };

        // Fair bit per slot; b = 1 keeps the scored candidate z1 in the
        // training set, b = 0 swaps in its partner z0 instead, so the
        // training-set size never depends on the bits.
        let bits: Vec<bool> = (0..cfg.m)
            .map(|trial| stream(cfg.seed, StreamTag::SlotBit, model * cfg.m + trial).gen())
            .collect();
        let mut excluded = vec![false; n];
        for (t, &b) in bits.iter().enumerate() {
            let z0 = candidates[2 * t];
            let z1 = candidates[2 * t + 1];
            excluded[if b { z0 } else { z1 }] = true;
        }
        let training: Vec<Vec<f64>> = (0..n)
            .filter(|i| !excluded[*i])
            .map(|i| dataset[i].clone())
            .collect();
        let mut train_rng = stream(cfg.seed, StreamTag::ModelTrain, model);
        let trained = mech.train(&Dataset::Points(training), &mut train_rng)?;

        let mut ref_rng = stream(cfg.seed, StreamTag::ModelReference, model);
        let reference_scores = (0..REFERENCE_POINTS)
            .map(|_| trained.score(&standard_normal_vec(dimension, &mut ref_rng)))
            .collect::<Result<Vec<_>>>()?;
        let member_scores = (0..m)
            .map(|t| trained.score(&dataset[candidates[2 * t + 1]]))
            .collect::<Result<Vec<_>>>()?;
        let guesses = percentile_threshold_attack(&member_scores, &reference_scores, alpha_pct)?;

        for (t, (&b, &b_hat)) in bits.iter().zip(guesses.iter()).enumerate() {
            records.push(OutcomeRecord {
                model_id: model,
                trial_id: t as u64,
                b,
                b_hat,
            });
        }
    }
    Ok(records)
}

/// Worst-case challenge selection: train a pilot batch on random halves of
/// the dataset, measure each example's mean loss gap between runs that
/// held it out and runs that trained on it, and take the examples with the
/// largest gaps. Examples never seen on one side rank last.
fn worst_case_candidates(
    mech: &Mechanism,
    dataset: &[Vec<f64>],
    need: usize,
    seed: u64,
    model: u64,
) -> Result<Vec<usize>> {
    let n = dataset.len();
    let mut sum_in = vec![0.0; n];
    let mut cnt_in = vec![0u32; n];
    let mut sum_out = vec![0.0; n];
    let mut cnt_out = vec![0u32; n];
    for pilot in 0..PILOT_MODELS {
        let mut rng = stream(seed, StreamTag::Pilot, model * PILOT_MODELS + pilot);
        let half = rand::seq::index::sample(&mut rng, n, n / 2).into_vec();
        let mut is_in = vec![false; n];
        for &i in &half {
            is_in[i] = true;
        }
        let rows: Vec<Vec<f64>> = half.iter().map(|&i| dataset[i].clone()).collect();
        let trained = mech.train(&Dataset::Points(rows), &mut rng)?;
        for i in 0..n {
            let s = trained.score(&dataset[i])?;
            if is_in[i] {
                sum_in[i] += s;
                cnt_in[i] += 1;
            } else {
                sum_out[i] += s;
                cnt_out[i] += 1;
            }
        }
    }
    let mut ranked: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let gap = if cnt_in[i] > 0 && cnt_out[i] > 0 {
                sum_out[i] / f64::from(cnt_out[i]) - sum_in[i] / f64::from(cnt_in[i])
            } else {
                f64::NEG_INFINITY
            };
            (gap, i)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    Ok(ranked.into_iter().take(need).map(|(_, i)| i).collect())
}
