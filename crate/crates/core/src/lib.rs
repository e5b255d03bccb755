//! Solver core for the blindfolded counters game.
//!
//! `n` counters modulo `m` sit on the positions of a table. Each turn the
//! table applies a permutation from a generator set `S` chosen by an
//! adversary, then the blindfolded player adds a fixed move vector. The
//! player wins as soon as every counter reads zero.
//!
//! This crate decides winnability, synthesizes oblivious winning move
//! sequences, verifies strategies exactly against the adaptive adversary and
//! produces impossibility certificates. It is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod game;
pub mod linalg;
pub mod perm;
pub mod refute;
pub mod synth;

pub use error::{Error, Result};
pub use game::{
    act, belief_step, leading_index, simulate_trace, simulate_trace_with_order, verify_strategy, verify_with, BeliefState,
    GameSpec, Strategy, Trace, TurnOrder, Verdict, VerifyOptions, Witness,
};
pub use linalg::{binomial_basis, fixed_chain_basis, fixed_space, solve_in_span, vp, ModVector, ZpBasis};
pub use perm::{
    cauchy_element, closure, closure_with_cap, compose, cyclic_blocks, element_order, inverse,
    normalize_generators, GeneratorSet, Group, Permutation,
};
pub use refute::{
    adversary_move, build_certificate, initial_bad_config, is_semi_homogeneous, project_strategy,
    run_adversary, subsample_strategy, UnsolvabilityCertificate,
};
pub use synth::{
    decide, decide_with_cap, enumeration_strategy, lift_strategy, optimal_length, synth, synth_mod_p, Construction,
    Reason, SolvabilityVerdict, Synthesis, synthesize,
};
