//! Multi-threaded dense belief steps.
//!
//! The source bitset is cut into word ranges; every worker folds its ranges
//! into a private bitset and the partial results are OR-ed together. Union is
//! order-independent, so the result does not depend on the thread count.

use blindfold_core::game::{verify_with_executor, DenseSet, StepExecutor, StepKernel};
use blindfold_core::{Result, Strategy, Verdict, VerifyOptions};
use rayon::prelude::*;

/// Below this many words a step runs on the calling thread.
const PARALLEL_MIN_WORDS: usize = 256;

pub struct Parallel {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl Parallel {
    /// `threads = 0` uses rayon's default (one per core).
    pub fn new(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        let threads = pool.current_num_threads();
        Parallel { pool, threads }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl StepExecutor for Parallel {
    fn step(&self, kernel: &StepKernel, src: &DenseSet) -> DenseSet {
        let words = src.words().len();
        let len = src.capacity();
        if self.threads <= 1 || words < PARALLEL_MIN_WORDS {
            let mut out = DenseSet::new(len);
            kernel.apply_words(src, 0..words, &mut out);
            return out;
        }
        let chunk = words.div_ceil(self.threads * 4).max(64);
        self.pool.install(|| {
            (0..words)
                .into_par_iter()
                .step_by(chunk)
                .fold(
                    || DenseSet::new(len),
                    |mut acc, start| {
                        kernel.apply_words(src, start..(start + chunk).min(words), &mut acc);
                        acc
                    },
                )
                .reduce(
                    || DenseSet::new(len),
                    |mut a, b| {
                        a.union_with(&b);
                        a
                    },
                )
        })
    }
}

/// [`blindfold_core::verify_with`] with dense steps spread over `threads` workers.
pub fn verify_parallel(strategy: &Strategy, opts: &VerifyOptions, threads: usize) -> Result<Verdict> {
    verify_with_executor(strategy, opts, &Parallel::new(threads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use blindfold_core::{synth, verify_with, GameSpec, ModVector};

    #[test]
    fn thread_count_does_not_change_the_verdict() {
        let good = synth(&GameSpec::rotations(3, 9).unwrap()).unwrap();
        let mut moves = good.moves().to_vec();
        moves.truncate(moves.len() - 1);
        moves.push(ModVector::zeros(9, 3));
        let bad = Strategy::new(good.spec().clone(), moves).unwrap();
        // 2^16 states, large enough to take the parallel path
        let wide_moves = (0..40u64)
            .map(|k| ModVector::from_reduced(2, (0..16u64).map(|i| (k * 7 + i * i * 3 + k * i) / 3)))
            .collect();
        let wide = Strategy::new(GameSpec::rotations(16, 2).unwrap(), wide_moves).unwrap();
        for s in [&good, &bad, &wide] {
            let opts = VerifyOptions { want_witness: true, ..Default::default() };
            let seq = verify_with(s, &opts).unwrap();
            for threads in [1, 2, 4, 7] {
                assert_eq!(verify_parallel(s, &opts, threads).unwrap(), seq);
            }
        }
    }
}
