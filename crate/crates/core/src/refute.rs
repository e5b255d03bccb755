//! Executable impossibility for unsolvable games.
//!
//! When a prime `p` divides `|G|` and a different prime `q` divides `m`,
//! pick `c ∈ G` of order `p` and partition (part of) the table into the
//! blocks `{ g c^i (x0) }`. A configuration is semi-homogeneous when it is
//! constant modulo `q` on every block. From a configuration that is not, the
//! adversary can always answer any move with a permutation that keeps it
//! that way, and the zero configuration is semi-homogeneous, so the player
//! never wins. [`adversary_move`] searches for that permutation.

use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};
use crate::game::{act, GameSpec, Strategy};
use crate::linalg::ModVector;
use crate::perm::{self, cauchy_element, cyclic_blocks, Permutation};
use crate::synth::decide;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsolvabilityCertificate {
    /// Prime dividing the group order.
    pub p: u64,
    /// Prime dividing the modulus, different from `p`.
    pub q: u64,
    /// Group element of order `p`.
    pub c: Permutation,
    pub blocks: Vec<Vec<usize>>,
}

impl UnsolvabilityCertificate {
    /// Rechecks every certificate condition against `spec`.
    pub fn validate(&self, spec: &GameSpec) -> Result<()> {
        let group = perm::closure(spec.gens())?;
        for prime in [self.p, self.q] {
            if !arith::is_prime(prime) {
                return Err(Error::NotPrime(prime));
            }
        }
        if self.p == self.q {
            return Err(Error::Solvable);
        }
        if !spec.m().is_multiple_of(self.q) {
            return Err(Error::NotADivisor {
                divisor: self.q,
                of: spec.m(),
            });
        }
        if self.c.len() != spec.n() {
            return Err(Error::LengthMismatch {
                expected: spec.n(),
                found: self.c.len(),
            });
        }
        // membership, order p (hence p | |G|) and block family
        let blocks = cyclic_blocks(&group, &self.c, self.p)?;
        if blocks != self.blocks || !blocks.iter().any(|b| b.len() >= 2) {
            return Err(Error::InvalidPermutation);
        }
        Ok(())
    }
}

/// Certificate for an unsolvable game. Prefers the smallest prime of `|G|`
/// not dividing `m`; otherwise pairs the smallest prime of `|G|` with the
/// smallest different prime of `m`.
pub fn build_certificate(spec: &GameSpec) -> Result<UnsolvabilityCertificate> {
    let verdict = decide(spec)?;
    if verdict.solvable {
        return Err(Error::Solvable);
    }
    let group_primes = arith::prime_divisors(verdict.group_order);
    let mod_primes = arith::prime_divisors(spec.m());
    let (p, q) = match group_primes.iter().find(|&&p| !spec.m().is_multiple_of(p)) {
        Some(&p) => (p, mod_primes[0]),
        None => {
            let p = group_primes[0];
            let q = *mod_primes.iter().find(|&&q| q != p).ok_or(Error::Solvable)?;
            (p, q)
        }
    };
    let group = perm::closure(spec.gens())?;
    let c = cauchy_element(&group, p)?;
    let blocks = cyclic_blocks(&group, &c, p)?;
    Ok(UnsolvabilityCertificate { p, q, c, blocks })
}

/// True iff every block is constant modulo `q`.
pub fn is_semi_homogeneous(x: &ModVector, cert: &UnsolvabilityCertificate) -> bool {
    let e = x.entries();
    cert.blocks.iter().all(|block| {
        let mut it = block.iter().map(|&i| e[i] % cert.q);
        match it.next() {
            Some(first) => it.all(|r| r == first),
            None => true,
        }
    })
}

/// A 1 at the smallest position of the first block with at least two
/// positions, zeros elsewhere.
pub fn initial_bad_config(cert: &UnsolvabilityCertificate, m: u64) -> Result<ModVector> {
    let block = cert
        .blocks
        .iter()
        .find(|b| b.len() >= 2)
        .ok_or(Error::AlreadySemiHomogeneous)?;
    if m < 2 {
        return Err(Error::AlreadySemiHomogeneous);
    }
    let x = ModVector::unit(m, cert.c.len(), block[0]);
    debug_assert!(!is_semi_homogeneous(&x, cert));
    Ok(x)
}

/// Index of the first generator `g` (in listed order) for which `g·x + y`
/// stays non-semi-homogeneous.
pub fn adversary_move(x: &ModVector, y: &ModVector, cert: &UnsolvabilityCertificate, spec: &GameSpec) -> Result<usize> {
    if is_semi_homogeneous(x, cert) {
        return Err(Error::AlreadySemiHomogeneous);
    }
    for (i, g) in spec.gens().perms().iter().enumerate() {
        if !is_semi_homogeneous(&act(g, x)?.add(y)?, cert) {
            return Ok(i);
        }
    }
    Err(Error::InvariantBroken)
}

/// Plays the adversary from `start` against `moves`, returning the chosen
/// generator indices. Fails if the invariant ever breaks or zero is reached.
pub fn run_adversary(
    cert: &UnsolvabilityCertificate,
    spec: &GameSpec,
    start: &ModVector,
    moves: impl IntoIterator<Item = ModVector>,
) -> Result<Vec<usize>> {
    let perms = spec.gens().perms();
    let mut x = start.clone();
    let mut choices = Vec::new();
    for y in moves {
        let gi = adversary_move(&x, &y, cert, spec)?;
        x = act(&perms[gi], &x)?.add(&y)?;
        if x.is_zero() || is_semi_homogeneous(&x, cert) {
            return Err(Error::InvariantBroken);
        }
        choices.push(gi);
    }
    Ok(choices)
}

/// Keeps coordinates `k−1, 2k−1, …, n−1` of every move, turning a strategy
/// for `n` rotating positions into one for `n / k` rotating positions.
pub fn subsample_strategy(strategy: &Strategy, k: usize) -> Result<Strategy> {
    let spec = strategy.spec();
    if !spec.gens().is_rotations() {
        return Err(Error::NotRotations);
    }
    let n = spec.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotADivisor {
            divisor: k as u64,
            of: n as u64,
        });
    }
    let coords: Vec<usize> = (1..=n / k).map(|j| j * k - 1).collect();
    let moves = strategy
        .moves()
        .iter()
        .map(|y| y.select(&coords))
        .collect::<Result<Vec<_>>>()?;
    Strategy::new(GameSpec::rotations(n / k, spec.m())?, moves)
}

/// Reduces every residue modulo `b`, which must divide `m`.
pub fn project_strategy(strategy: &Strategy, b: u64) -> Result<Strategy> {
    let m = strategy.spec().m();
    if b == 0 || !m.is_multiple_of(b) {
        return Err(Error::NotADivisor { divisor: b, of: m });
    }
    let moves = strategy
        .moves()
        .iter()
        .map(|y| y.project(b))
        .collect::<Result<Vec<_>>>()?;
    Strategy::new(strategy.spec().with_modulus(b)?, moves)
}
