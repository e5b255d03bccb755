//! Seeded random strategies and the refutation fuzzer.

use blindfold_core::refute::run_adversary;
use blindfold_core::{initial_bad_config, GameSpec, ModVector, Result, Strategy, UnsolvabilityCertificate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default seed for every randomized subcommand.
pub const DEFAULT_SEED: u64 = 0x0b11_d5ee_d000_0001;

/// Independent generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_move(spec: &GameSpec, rng: &mut impl Rng) -> ModVector {
    let m = spec.m();
    ModVector::from_reduced(m, (0..spec.n()).map(|_| rng.gen_range(0..m)))
}

pub fn random_strategy(spec: &GameSpec, len: usize, rng: &mut impl Rng) -> Strategy {
    let moves = (0..len).map(|_| random_move(spec, rng)).collect();
    Strategy::new(spec.clone(), moves).expect("moves match the spec")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzReport {
    pub cases: usize,
    pub rounds: usize,
}

/// Plays the certificate's adversary from the initial bad configuration
/// against `cases` random move sequences of `rounds` moves each.
pub fn fuzz_refutation(
    spec: &GameSpec,
    cert: &UnsolvabilityCertificate,
    cases: usize,
    rounds: usize,
    seed: u64,
) -> Result<FuzzReport> {
    let start = initial_bad_config(cert, spec.m())?;
    (0..cases).into_par_iter().try_for_each(|case| {
        let mut rng = case_rng(seed, case as u64);
        let moves = (0..rounds).map(|_| random_move(spec, &mut rng));
        run_adversary(cert, spec, &start, moves).map(|_| ())
    })?;
    Ok(FuzzReport { cases, rounds })
}
