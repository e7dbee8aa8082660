//! Simulation harness for membership-distinguishing games: synthetic
//! mechanisms with known privacy guarantees, attack strategies, the game
//! protocols, and analysis drivers (expected-width sweeps, coverage
//! experiments).
//!
//! All randomness flows through named, independently seeded streams derived
//! from the master seed, so results are bit-reproducible and independent of
//! evaluation order: replicate r, model j, and challenge slot g each own
//! their streams, and nothing is shared across them.

mod adversary;
mod analysis;
mod mechanisms;
mod protocol;

pub use adversary::{calibrate_alpha, percentile_threshold_attack, AdversarySpec, ThresholdRegime};
pub use analysis::{coverage_experiment, expected_tally, sample_size_sweep, SweepReport, SweepRow};
pub use mechanisms::{Dataset, Mechanism, Model};
pub use protocol::{run_ind_mia, run_mia_m, DEFAULT_GAME_N};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rates::{ConfusionTally, OutcomeRecord};

/// Shape of a multi-sample distinguishing run: `n_models` independently
/// trained models, `m` challenge slots per model, datasets of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    /// Challenge slots per trained model.
    pub m: u64,
    /// Number of independently trained models.
    pub n_models: u64,
    /// Dataset size per model (ignored by mechanisms that do not train on
    /// data).
    pub n: u64,
    /// Master seed; every stream in the run derives from it.
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::domain("m (samples per model) must be at least 1"));
        }
        if self.n_models == 0 {
            return Err(Error::domain("n_models must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::domain("dataset size n must be at least 1"));
        }
        match self.m.checked_mul(self.n_models) {
            Some(total) if total <= 1_000_000_000 => Ok(()),
            _ => Err(Error::domain(
                "total sample count m * n_models exceeds the supported range",
            )),
        }
    }

    /// Total number of outcome records the run produces.
    pub fn total_samples(&self) -> u64 {
        self.m * self.n_models
    }
}

/// Everything a simulation run produces: the per-slot outcome records, the
/// aggregated confusion tally, and an echo of the configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub config: ExperimentConfig,
    pub records: Vec<OutcomeRecord>,
    pub tally: ConfusionTally,
}

/// Role of a derived random stream. Each (tag, index) pair owns a
/// dedicated generator, so regrouping work across models or replicates
/// never shifts anyone else's randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum StreamTag {
    /// Per-replicate master derivation in coverage runs.
    Rep = 1,
    /// The fair membership bit of one challenge slot.
    SlotBit = 2,
    /// Mechanism noise attached to one challenge slot.
    SlotNoise = 3,
    /// Dataset generation and challenge selection for one model.
    ModelData = 4,
    /// Training noise for one model.
    ModelTrain = 5,
    /// Reference score population for one model's threshold.
    ModelReference = 6,
    /// Pilot trainings used by worst-case challenge selection.
    Pilot = 7,
}

/// SplitMix64 finalizer: a full-avalanche 64-bit mix.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Deterministic seed for the stream (tag, idx) under a master seed.
pub(crate) fn stream_seed(master: u64, tag: StreamTag, idx: u64) -> u64 {
    let a = mix64(master.wrapping_add(GOLDEN));
    let b = mix64(a ^ (tag as u64).wrapping_mul(GOLDEN));
    mix64(b ^ idx.wrapping_mul(GOLDEN))
}

/// Fresh generator for the stream (tag, idx) under a master seed.
pub(crate) fn stream(master: u64, tag: StreamTag, idx: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, tag, idx))
}
