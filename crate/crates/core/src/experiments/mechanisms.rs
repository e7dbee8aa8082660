//! Synthetic mechanisms with known privacy guarantees, used as ground
//! truth for the distinguishing games.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A randomized release procedure with a stated (ε, δ) guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mechanism {
    /// One-bit randomized response: the challenge bit is released flipped
    /// with probability 1/(1+e^ε), which is (ε, 0)-DP by construction.
    /// The likelihood-ratio distinguisher against it attains
    /// FNR = FPR = 1/(1+e^ε) exactly.
    RandomizedResponse { eps_true: f64 },
    /// Clipped-mean release under Gaussian noise with the classical scale
    /// σ = Δ₂ · sqrt(2 ln(1.25/δ)) / ε and replace-one sensitivity
    /// Δ₂ = 2 · clip_norm / n. The calibration is a conservative bound
    /// (tight only in the high-privacy regime), so ε is an upper bound on
    /// the mechanism's true budget.
    GaussianMean {
        eps: f64,
        delta: f64,
        dimension: usize,
        clip_norm: f64,
    },
}

impl Mechanism {
    pub fn randomized_response(eps_true: f64) -> Result<Self> {
        let mech = Mechanism::RandomizedResponse { eps_true };
        mech.validate()?;
        Ok(mech)
    }

    pub fn gaussian_mean(eps: f64, delta: f64, dimension: usize, clip_norm: f64) -> Result<Self> {
        let mech = Mechanism::GaussianMean {
            eps,
            delta,
            dimension,
            clip_norm,
        };
        mech.validate()?;
        Ok(mech)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Mechanism::RandomizedResponse { eps_true } => {
                if !eps_true.is_finite() || eps_true < 0.0 {
                    return Err(Error::domain(format!(
                        "randomized response needs finite eps_true >= 0, got {eps_true}"
                    )));
                }
                Ok(())
            }
            Mechanism::GaussianMean {
                eps,
                delta,
                dimension,
                clip_norm,
            } => {
                if !eps.is_finite() || eps <= 0.0 {
                    return Err(Error::domain(format!(
                        "gaussian-mean needs finite eps > 0, got {eps}"
                    )));
                }
                if !(delta > 0.0 && delta < 1.0) {
                    return Err(Error::domain(format!(
                        "gaussian-mean needs delta in (0, 1), got {delta}"
                    )));
                }
                if dimension == 0 {
                    return Err(Error::domain("gaussian-mean needs dimension >= 1"));
                }
                if !clip_norm.is_finite() || clip_norm <= 0.0 {
                    return Err(Error::domain(format!(
                        "gaussian-mean needs finite clip_norm > 0, got {clip_norm}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mechanism::RandomizedResponse { .. } => "rr",
            Mechanism::GaussianMean { .. } => "gaussian-mean",
        }
    }

    /// Runs the training routine, consuming randomness only through `rng`.
    /// Randomized response is a stateless per-bit channel — its training
    /// ignores the data and draws nothing; the noise is spent at release
    /// time, one draw per challenge.
    pub fn train(&self, data: &Dataset, rng: &mut ChaCha8Rng) -> Result<Model> {
        self.validate()?;
        match (self, data) {
            (Mechanism::RandomizedResponse { eps_true }, _) => Ok(Model::RrChannel {
                eps_true: *eps_true,
            }),
            (
                Mechanism::GaussianMean {
                    eps,
                    delta,
                    dimension,
                    clip_norm,
                },
                Dataset::Points(rows),
            ) => {
                if rows.is_empty() {
                    return Err(Error::degenerate(
                        "gaussian-mean training needs at least one example",
                    ));
                }
                for row in rows {
                    if row.len() != *dimension {
                        return Err(Error::domain(format!(
                            "training example has dimension {}, mechanism expects {}",
                            row.len(),
                            dimension
                        )));
                    }
                }
                let n = rows.len() as f64;
                let mut theta = vec![0.0; *dimension];
                for row in rows {
                    let c = clipped(row, *clip_norm);
                    for (t, v) in theta.iter_mut().zip(c.iter()) {
                        *t += v;
                    }
                }
                for t in theta.iter_mut() {
                    *t /= n;
                }
                let sigma = (2.0 * clip_norm / n) * (2.0 * (1.25 / delta).ln()).sqrt() / eps;
                for t in theta.iter_mut() {
                    *t += sigma * rng.sample::<f64, _>(StandardNormal);
                }
                Ok(Model::MeanEstimate {
                    theta,
                    clip_norm: *clip_norm,
                })
            }
            (Mechanism::GaussianMean { .. }, Dataset::Bits(_)) => Err(Error::domain(
                "gaussian-mean trains on point datasets, not bit datasets",
            )),
        }
    }
}

/// Training data handed to a mechanism.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Bits(Vec<bool>),
    Points(Vec<Vec<f64>>),
}

/// The released output of one training run.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Randomized response as a channel: one noisy view per challenge bit.
    RrChannel { eps_true: f64 },
    /// Privatized mean estimate along with the clip norm used to score
    /// challenges consistently with training.
    MeanEstimate { theta: Vec<f64>, clip_norm: f64 },
}

impl Model {
    /// Loss score of a challenge point: squared distance between the
    /// clipped challenge and the released mean. Lower is more member-like,
    /// since training pulls the mean toward included points.
    pub fn score(&self, z: &[f64]) -> Result<f64> {
        match self {
            Model::MeanEstimate { theta, clip_norm } => {
                if z.len() != theta.len() {
                    return Err(Error::domain(format!(
                        "challenge has dimension {}, model expects {}",
                        z.len(),
                        theta.len()
                    )));
                }
                let c = clipped(z, *clip_norm);
                Ok(c.iter()
                    .zip(theta.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum())
            }
            Model::RrChannel { .. } => Err(Error::domain(
                "randomized response has no loss surface to score",
            )),
        }
    }

    /// Releases the noisy view of one challenge bit.
    pub fn release_bit(&self, bit: bool, rng: &mut ChaCha8Rng) -> Result<bool> {
        match self {
            Model::RrChannel { eps_true } => {
                let flip = 1.0 / (1.0 + eps_true.exp());
                Ok(if rng.gen_bool(flip) { !bit } else { bit })
            }
            Model::MeanEstimate { .. } => Err(Error::domain(
                "the mean-release model carries no bit channel",
            )),
        }
    }
}

/// Scales `x` down to `clip_norm` when its Euclidean norm exceeds it.
pub(crate) fn clipped(x: &[f64], clip_norm: f64) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= clip_norm {
        return x.to_vec();
    }
    let s = clip_norm / norm;
    x.iter().map(|v| v * s).collect()
}

/// One standard-normal vector of the given dimension.
pub(crate) fn standard_normal_vec(dimension: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dimension)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}
