//! Game semantics: specifications, strategies, the permutation action and
//! exact verification against an adaptive adversary.
//!
//! A round is: the table applies some `g ∈ S`, the player adds the next
//! move, and the configuration is checked for zero. The starting
//! configuration is a checkpoint as well.

mod belief;
mod verify;

use alloc::vec::Vec;

pub use belief::{belief_step, BeliefState, DenseSet, Encoder, Sequential, StepExecutor, StepKernel, DENSE_LIMIT};
pub use verify::{verify_strategy, verify_with, verify_with_executor, Verdict, VerifyOptions, Witness, DEFAULT_STATE_CAP};

use crate::error::{Error, Result};
use crate::linalg::{solve_in_span, ModVector, ZpBasis};
use crate::perm::{GeneratorSet, Permutation};

/// Game parameters `(S, m)` on `n` positions. `S` always contains the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    n: usize,
    m: u64,
    gens: GeneratorSet,
}

impl GameSpec {
    pub fn new(m: u64, gens: GeneratorSet) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidResidue { value: 0, modulus: 0 });
        }
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if !gens.contains_identity() {
            return Err(Error::NotAGenerator);
        }
        Ok(GameSpec { n: gens.n(), m, gens })
    }

    /// The table may rotate to any of its `n` orientations.
    pub fn rotations(n: usize, m: u64) -> Result<Self> {
        Self::new(m, GeneratorSet::rotations(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn with_modulus(&self, m: u64) -> Result<Self> {
        Self::new(m, self.gens.clone())
    }

    pub fn identity_index(&self) -> usize {
        self.gens
            .perms()
            .iter()
            .position(Permutation::is_identity)
            .expect("spec always contains the identity")
    }
}

/// An oblivious move sequence for a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    spec: GameSpec,
    moves: Vec<ModVector>,
}

impl Strategy {
    pub fn new(spec: GameSpec, moves: Vec<ModVector>) -> Result<Self> {
        for y in &moves {
            if y.modulus() != spec.m {
                return Err(Error::ModulusMismatch {
                    expected: spec.m,
                    found: y.modulus(),
                });
            }
            if y.len() != spec.n {
                return Err(Error::LengthMismatch {
                    expected: spec.n,
                    found: y.len(),
                });
            }
        }
        Ok(Strategy { spec, moves })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn moves(&self) -> &[ModVector] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Same spec, moves truncated to the first `k`.
    pub fn truncated(&self, k: usize) -> Strategy {
        Strategy {
            spec: self.spec.clone(),
            moves: self.moves[..k.min(self.moves.len())].to_vec(),
        }
    }

    pub fn into_moves(self) -> Vec<ModVector> {
        self.moves
    }
}

/// Which of permutation and move comes first within a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TurnOrder {
    /// Permute, add the move, check for zero.
    #[default]
    PermuteThenMove,
    /// Add the move, check for zero, permute.
    MoveThenPermute,
}

/// `g·x`: the entry at position `i` moves to position `g(i)`.
pub fn act(g: &Permutation, x: &ModVector) -> Result<ModVector> {
    x.permuted(g)
}

/// One concrete play of the game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// The start followed by the configuration after every round.
    pub configs: Vec<ModVector>,
    /// Index into `configs` of the first zero configuration, if any.
    pub won_at: Option<usize>,
}

impl Trace {
    pub fn won(&self) -> bool {
        self.won_at.is_some()
    }
}

/// Replays one adversary line in the canonical round order.
pub fn simulate_trace(spec: &GameSpec, start: &ModVector, moves: &[ModVector], perm_choices: &[usize]) -> Result<Trace> {
    simulate_trace_with_order(spec, start, moves, perm_choices, TurnOrder::PermuteThenMove)
}

/// Replays one adversary line. Under [`TurnOrder::MoveThenPermute`] the
/// choice at index `k` is applied after move `k`.
pub fn simulate_trace_with_order(
    spec: &GameSpec,
    start: &ModVector,
    moves: &[ModVector],
    perm_choices: &[usize],
    order: TurnOrder,
) -> Result<Trace> {
    if perm_choices.len() != moves.len() {
        return Err(Error::LengthMismatch {
            expected: moves.len(),
            found: perm_choices.len(),
        });
    }
    if start.modulus() != spec.m {
        return Err(Error::ModulusMismatch {
            expected: spec.m,
            found: start.modulus(),
        });
    }
    let perms = spec.gens.perms();
    let mut x = start.clone();
    let mut configs = Vec::with_capacity(moves.len() + 1);
    let mut won_at = x.is_zero().then_some(0);
    configs.push(x.clone());
    for (k, (y, &c)) in moves.iter().zip(perm_choices).enumerate() {
        let g = perms.get(c).ok_or(Error::IndexOutOfRange {
            index: c,
            len: perms.len(),
        })?;
        x = match order {
            TurnOrder::PermuteThenMove => act(g, &x)?.add(y)?,
            TurnOrder::MoveThenPermute => x.add(y)?,
        };
        if won_at.is_none() && x.is_zero() {
            won_at = Some(k + 1);
        }
        if order == TurnOrder::MoveThenPermute {
            x = act(g, &x)?;
        }
        configs.push(x.clone());
    }
    Ok(Trace { configs, won_at })
}

/// Largest basis index with a nonzero coefficient in the expansion of `x`,
/// or `None` for the zero vector.
pub fn leading_index(x: &ModVector, basis: &ZpBasis) -> Result<Option<usize>> {
    let coeffs = solve_in_span(basis.vectors(), x)?.ok_or(Error::LengthMismatch {
        expected: basis.len(),
        found: x.len(),
    })?;
    Ok(coeffs.iter().rposition(|&c| c != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::binomial_basis;
    use alloc::vec;

    fn mv(m: u64, e: &[u64]) -> ModVector {
        ModVector::new(m, e.to_vec()).unwrap()
    }

    #[test]
    fn act_examples() {
        let x = mv(5, &[1, 2, 3, 4]);
        assert_eq!(act(&Permutation::identity(4), &x).unwrap(), x);
        assert_eq!(act(&Permutation::rotation(4, 1), &x).unwrap(), mv(5, &[4, 1, 2, 3]));
        assert!(act(&Permutation::identity(3), &x).is_err());
        let g = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let y = mv(5, &[4, 4, 0, 1]);
        assert_eq!(
            act(&g, &x.add(&y).unwrap()).unwrap(),
            act(&g, &x).unwrap().add(&act(&g, &y).unwrap()).unwrap()
        );
    }

    #[test]
    fn spec_requires_identity() {
        let gens = GeneratorSet::new(2, vec![Permutation::new(vec![1, 0]).unwrap()]).unwrap();
        assert_eq!(GameSpec::new(2, gens.clone()).unwrap_err(), Error::NotAGenerator);
        assert!(GameSpec::new(2, gens.with_identity()).is_ok());
        assert!(GameSpec::rotations(3, 0).is_err());
    }

    #[test]
    fn trace_examples() {
        let spec = GameSpec::rotations(2, 2).unwrap();
        let t = simulate_trace(&spec, &mv(2, &[0, 0]), &[mv(2, &[1, 0])], &[1]).unwrap();
        assert_eq!(t.won_at, Some(0));
        let t = simulate_trace(&spec, &mv(2, &[1, 1]), &[mv(2, &[1, 1])], &[0]).unwrap();
        assert_eq!(t.won_at, Some(1));
        assert_eq!(t.configs, vec![mv(2, &[1, 1]), mv(2, &[0, 0])]);
        assert!(matches!(
            simulate_trace(&spec, &mv(2, &[1, 1]), &[mv(2, &[1, 1])], &[2]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(simulate_trace(&spec, &mv(2, &[1, 1]), &[mv(2, &[1, 1])], &[]).is_err());
    }

    #[test]
    fn leading_index_examples() {
        let b = binomial_basis(2, 4).unwrap();
        assert_eq!(leading_index(&mv(2, &[0, 0, 0, 0]), &b).unwrap(), None);
        assert_eq!(leading_index(&mv(2, &[0, 0, 0, 1]), &b).unwrap(), Some(3));
        assert_eq!(leading_index(&mv(2, &[1, 0, 0, 0]), &b).unwrap(), Some(3));
        assert_eq!(leading_index(&mv(2, &[1, 1, 1, 1]), &b).unwrap(), Some(0));
    }

    #[test]
    fn rotation_preserves_leading_coefficient() {
        for (p, n) in [(2u64, 4usize), (2, 8), (3, 3), (3, 9), (5, 5)] {
            let b = binomial_basis(p, n).unwrap();
            let enc = Encoder::new(p, n).unwrap();
            let sample = enc.size().min(2000);
            for code in 0..sample {
                let x = enc.decode(code * (enc.size() / sample));
                let cx = b.coordinates(&x).unwrap();
                let lead = cx.iter().rposition(|&c| c != 0);
                for k in 0..n {
                    let gx = act(&Permutation::rotation(n, k), &x).unwrap();
                    let cg = b.coordinates(&gx).unwrap();
                    assert_eq!(cg.iter().rposition(|&c| c != 0), lead);
                    if let Some(j) = lead {
                        assert_eq!(cg[j], cx[j]);
                    }
                }
            }
        }
    }
}
