use alloc::vec;
use alloc::vec::Vec;

use super::belief::{BeliefState, Encoder, Sequential, StepExecutor, StepKernel};
use super::{act, Strategy, TurnOrder};
use crate::error::{Error, Result};
use crate::linalg::ModVector;
use crate::perm::{inverse, Permutation};

/// Default bound on `m^n` accepted by the verifier.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;

/// Default bound on the bits of belief history kept for witness extraction.
pub const DEFAULT_WITNESS_BUDGET: u128 = 1 << 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub want_witness: bool,
    pub state_cap: u64,
    pub witness_budget_bits: u128,
    pub turn_order: TurnOrder,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            want_witness: false,
            state_cap: DEFAULT_STATE_CAP,
            witness_budget_bits: DEFAULT_WITNESS_BUDGET,
            turn_order: TurnOrder::PermuteThenMove,
        }
    }
}

/// A start configuration and adversary choices (generator indices) that
/// keep the configuration nonzero through the whole strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub start: ModVector,
    pub perms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub wins: bool,
    /// Moves processed before the belief set emptied (or all of them).
    pub steps_checked: usize,
    /// Configuration transitions evaluated: `Σ |B_t| · |S|` over processed rounds.
    pub transitions: u64,
    pub witness: Option<Witness>,
}

/// Exact check of `strategy` against every start and every adversary line.
pub fn verify_strategy(strategy: &Strategy, want_witness: bool) -> Result<Verdict> {
    verify_with(
        strategy,
        &VerifyOptions {
            want_witness,
            ..VerifyOptions::default()
        },
    )
}

pub fn verify_with(strategy: &Strategy, opts: &VerifyOptions) -> Result<Verdict> {
    verify_with_executor(strategy, opts, &Sequential)
}

/// Runs the belief-set iteration, delegating dense steps to `exec`.
///
/// The belief set starts as every nonzero configuration (zero has already
/// won). After each round it holds exactly the configurations reachable by
/// some start and adversary line that has not hit zero yet, so the strategy
/// wins iff the set becomes empty.
pub fn verify_with_executor(strategy: &Strategy, opts: &VerifyOptions, exec: &dyn StepExecutor) -> Result<Verdict> {
    let spec = strategy.spec();
    let enc = Encoder::new(spec.m(), spec.n()).map_err(|_| Error::StateCapExceeded { cap: opts.state_cap })?;
    if enc.size() > opts.state_cap {
        return Err(Error::StateCapExceeded { cap: opts.state_cap });
    }
    let moves = strategy.moves();
    if opts.want_witness {
        let bits = (moves.len() as u128 + 1) * enc.size() as u128;
        if bits > opts.witness_budget_bits {
            return Err(Error::WitnessBudgetExceeded {
                bits,
                budget: opts.witness_budget_bits,
            });
        }
    }

    let identity_only = [Permutation::identity(spec.n())];
    let round_perms = |t: usize| -> &[Permutation] {
        if t == 0 && opts.turn_order == TurnOrder::MoveThenPermute {
            &identity_only
        } else {
            spec.gens().perms()
        }
    };

    let mut belief = BeliefState::all_nonzero(spec.m(), spec.n())?;
    let mut history = Vec::new();
    let mut transitions = 0u64;
    for (t, y) in moves.iter().enumerate() {
        if belief.is_empty() {
            return Ok(Verdict {
                wins: true,
                steps_checked: t,
                transitions,
                witness: None,
            });
        }
        let kernel = StepKernel::new(&enc, round_perms(t), y)?;
        transitions += belief.len() * kernel.generator_count() as u64;
        let next = belief.step_with(&kernel, exec);
        if opts.want_witness {
            history.push(belief);
        }
        belief = next;
    }
    if belief.is_empty() {
        return Ok(Verdict {
            wins: true,
            steps_checked: moves.len(),
            transitions,
            witness: None,
        });
    }
    let witness = if opts.want_witness {
        history.push(belief);
        Some(extract_witness(strategy, &enc, &history, &round_perms, opts.turn_order)?)
    } else {
        None
    };
    Ok(Verdict {
        wins: false,
        steps_checked: moves.len(),
        transitions,
        witness,
    })
}

/// Walks the belief history backwards, choosing the first generator whose
/// preimage of the current configuration lies in the previous belief set.
fn extract_witness<'a>(
    strategy: &Strategy,
    enc: &Encoder,
    history: &[BeliefState],
    round_perms: &dyn Fn(usize) -> &'a [Permutation],
    order: TurnOrder,
) -> Result<Witness> {
    let spec = strategy.spec();
    let moves = strategy.moves();
    let last = history.last().expect("history holds the final belief");
    let mut x = enc.decode(last.codes()[0]);
    let mut choices = vec![0usize; moves.len()];
    for t in (0..moves.len()).rev() {
        let before = x.sub(&moves[t])?;
        let prev = &history[t];
        let (gi, pre) = round_perms(t)
            .iter()
            .enumerate()
            .find_map(|(gi, g)| {
                let pre = act(&inverse(g), &before).ok()?;
                prev.contains(&pre).then_some((gi, pre))
            })
            .expect("every surviving configuration has a surviving predecessor");
        choices[t] = gi;
        x = pre;
    }
    let perms = match order {
        TurnOrder::PermuteThenMove => choices,
        TurnOrder::MoveThenPermute => {
            // the permutation chosen before move t+1 is applied after move t
            let id = spec.identity_index();
            let mut shifted: Vec<usize> = choices.into_iter().skip(1).collect();
            if !moves.is_empty() {
                shifted.push(id);
            }
            shifted
        }
    };
    Ok(Witness { start: x, perms })
}
