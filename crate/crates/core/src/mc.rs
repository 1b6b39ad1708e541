//! Deterministic Monte Carlo execution.
//!
//! Every block of trials draws from its own counter-derived random stream,
//! keyed by `(seed, block index)`. Blocks may run on any number of threads in
//! any order; their partial tallies are merged in block order, so a plan
//! yields bit-identical results whatever the worker count.

use std::fmt::Display;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Random stream handed to trial functions.
pub type Stream = ChaCha8Rng;

pub const DEFAULT_BLOCK_SIZE: u64 = 4096;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the random stream addressed by `(seed, indices...)`.
///
/// The index tuple is absorbed position by position, so `[1, 0]` and
/// `[0, 1]` address different streams, as do `[0]` and `[0, 0]`.
pub fn derive_stream(seed: u64, indices: &[u64]) -> Stream {
    let mut state = splitmix64(seed);
    for (pos, &idx) in indices.iter().enumerate() {
        state = splitmix64(state ^ splitmix64(idx ^ (pos as u64 + 1).wrapping_mul(GOLDEN_GAMMA)));
    }
    state = splitmix64(state ^ indices.len() as u64);

    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Number of worker threads on this machine.
pub fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub seed: u64,
    pub n_trials: u64,
    pub block_size: u64,
}

impl TrialPlan {
    pub fn new(seed: u64, n_trials: u64) -> Result<Self> {
        Self::with_block_size(seed, n_trials, DEFAULT_BLOCK_SIZE)
    }

    pub fn with_block_size(seed: u64, n_trials: u64, block_size: u64) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::domain("a trial plan needs at least one trial"));
        }
        if block_size == 0 {
            return Err(Error::domain("block size must be at least 1"));
        }
        Ok(Self {
            seed,
            n_trials,
            block_size,
        })
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_trials.div_ceil(self.block_size)
    }

    /// Plan with the same shape whose streams are disjoint from this one's,
    /// addressed by `tag` (e.g. a setting index).
    pub fn substream(&self, tag: u64) -> TrialPlan {
        TrialPlan {
            seed: splitmix64(self.seed ^ splitmix64(tag.wrapping_add(0x5eed))),
            ..*self
        }
    }

    fn block_range(&self, block: u64) -> std::ops::Range<u64> {
        let start = block * self.block_size;
        start..(start + self.block_size).min(self.n_trials)
    }
}

/// Order-independent accumulator of trial outcomes.
pub trait Tally: Default + Send {
    type Sample;

    fn record(&mut self, sample: Self::Sample);

    fn merge(&mut self, other: Self);
}

/// Runs every trial of `plan` and reduces the samples into a `T`.
///
/// `workers` caps the number of threads (`0` means all available cores).
/// The trial function gets the block's stream and the global trial index.
pub fn run_trials<T, F, E>(plan: &TrialPlan, workers: usize, trial: F) -> Result<T>
where
    T: Tally,
    F: Fn(&mut Stream, u64) -> std::result::Result<T::Sample, E> + Sync,
    E: Display,
{
    let run_block = |block: u64| -> Result<T> {
        let mut stream = derive_stream(plan.seed, &[block]);
        let mut tally = T::default();
        for i in plan.block_range(block) {
            let sample = trial(&mut stream, i).map_err(|e| Error::Trial {
                block,
                trial: i,
                message: e.to_string(),
            })?;
            tally.record(sample);
        }
        Ok(tally)
    };

    let n_blocks = plan.n_blocks();
    let threads = if workers == 0 {
        available_workers()
    } else {
        workers
    };
    let partials: Vec<Result<T>> = if threads == 1 || n_blocks == 1 {
        (0..n_blocks).map(run_block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..n_blocks).into_par_iter().map(run_block).collect())
    };

    let mut total = T::default();
    for partial in partials {
        total.merge(partial?);
    }
    Ok(total)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

/// Mean and standard error of real-valued samples.
#[derive(Debug, Clone, Default)]
pub struct MeanTally {
    n: u64,
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

impl MeanTally {
    pub fn estimate(&self) -> Estimate {
        if self.n == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                n: 0,
            };
        }
        let n = self.n as f64;
        let mean = self.sum.value() / n;
        let stderr = if self.n < 2 {
            0.0
        } else {
            let var = ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        Estimate {
            mean,
            stderr,
            n: self.n,
        }
    }
}

impl Tally for MeanTally {
    type Sample = f64;

    fn record(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    fn merge(&mut self, other: Self) {
        self.n += other.n;
        self.sum.add(other.sum.sum);
        self.sum.add(other.sum.compensation);
        self.sum_sq.add(other.sum_sq.sum);
        self.sum_sq.add(other.sum_sq.compensation);
    }
}
