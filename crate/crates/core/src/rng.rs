//! Seeding for reproducible parallel Monte Carlo.
//!
//! Every random draw in an experiment is a function of `(master seed, trial
//! index)`: each trial owns a ChaCha8 stream selected by its index, so results
//! do not depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type TrialRng = ChaCha8Rng;

/// Trials are reduced in fixed-size blocks so that floating-point sums are
/// associated the same way regardless of the thread count.
pub const BLOCK_SIZE: usize = 1024;

/// The random stream owned by one trial.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel and folds their outputs.
///
/// `init` creates an empty accumulator, `step` folds one trial into it and
/// `merge` combines block accumulators. Blocks are merged left to right in
/// trial order, so the result is bit-identical for any thread count.
pub fn par_trials<A, I, S, M>(seed: u64, trials: usize, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    S: Fn(&mut A, &mut TrialRng, usize) + Sync + Send,
    M: Fn(&mut A, A),
{
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let partials: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            let lo = b * BLOCK_SIZE;
            let hi = (lo + BLOCK_SIZE).min(trials);
            for t in lo..hi {
                let mut rng = trial_rng(seed, t as u64);
                step(&mut acc, &mut rng, t);
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in partials {
        merge(&mut total, p);
    }
    total
}

// Sample-block streams live in their own range so they never coincide with
// the per-trial streams drawn from the same seed.
const SAMPLE_STREAM_TAG: u64 = 1 << 62;

/// Counts how many of `n` independent draws satisfy `hit`.
///
/// Draws are grouped into blocks of [`BLOCK_SIZE`], each with its own stream,
/// so the count depends only on `(seed, n)`.
pub fn par_count<F>(seed: u64, n: usize, hit: F) -> u64
where
    F: Fn(&mut TrialRng) -> bool + Sync + Send,
{
    let blocks = n.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = trial_rng(seed, SAMPLE_STREAM_TAG | b as u64);
            let len = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
            (0..len).filter(|_| hit(&mut rng)).count() as u64
        })
        .sum()
}

/// Runs trials in parallel and returns their outputs in trial order.
pub fn par_collect<T, F>(seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut TrialRng, usize) -> T + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            f(&mut rng, t)
        })
        .collect()
}
