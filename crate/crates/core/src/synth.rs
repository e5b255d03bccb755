//! Winnability decision and construction of winning strategies.
//!
//! For `|G| = p^a` and `m = p` the strategy is a ruler sequence over a basis
//! whose partial spans are invariant: move `i` is basis vector number
//! `v_p(i)`. Moduli `p^b` are reached by lifting, and the trivial group is
//! handled by walking a Gray code through every nonzero configuration.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};
use crate::game::{GameSpec, Strategy};
use crate::linalg::{binomial_basis, fixed_chain_basis, vp, ModVector, ZpBasis};
use crate::perm::{self, Group, Permutation, DEFAULT_GROUP_CAP};

/// Synthesis refuses to build strategies longer than this.
pub const MAX_SYNTH_MOVES: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    TrivialGroup,
    UnitModulus,
    PrimePowerMatch,
    MixedPrimes,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::TrivialGroup => "trivial-group",
            Reason::UnitModulus => "unit-modulus",
            Reason::PrimePowerMatch => "prime-power-match",
            Reason::MixedPrimes => "mixed-primes",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvabilityVerdict {
    pub solvable: bool,
    pub group_order: u64,
    pub reason: Reason,
    /// Set when `reason` is [`Reason::PrimePowerMatch`]: `|G| = p^a`, `m = p^b`.
    pub p: Option<u64>,
    pub a: Option<u32>,
    pub b: Option<u32>,
}

pub fn decide(spec: &GameSpec) -> Result<SolvabilityVerdict> {
    decide_with_cap(spec, DEFAULT_GROUP_CAP)
}

pub fn decide_with_cap(spec: &GameSpec, group_cap: usize) -> Result<SolvabilityVerdict> {
    let group = perm::closure_with_cap(spec.gens(), group_cap)?;
    Ok(decide_for_group(spec, &group))
}

fn decide_for_group(spec: &GameSpec, group: &Group) -> SolvabilityVerdict {
    let order = group.order();
    let mut v = SolvabilityVerdict {
        solvable: true,
        group_order: order,
        reason: Reason::UnitModulus,
        p: None,
        a: None,
        b: None,
    };
    if spec.m() == 1 {
        return v;
    }
    if order == 1 {
        v.reason = Reason::TrivialGroup;
        return v;
    }
    match (arith::as_prime_power(order), arith::as_prime_power(spec.m())) {
        (Some((p, a)), Some((q, b))) if p == q => {
            v.reason = Reason::PrimePowerMatch;
            v.p = Some(p);
            v.a = Some(a);
            v.b = Some(b);
        }
        _ => {
            v.solvable = false;
            v.reason = Reason::MixedPrimes;
        }
    }
    v
}

/// `m^n − 1`, the minimum number of moves of any winning strategy.
pub fn optimal_length(n: usize, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidResidue { value: 0, modulus: 0 });
    }
    Ok(arith::checked_pow(m, n as u64)? - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Binomial,
    FixedChain,
    Gray,
    Lift,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Binomial => "binomial",
            Construction::FixedChain => "fixed-chain",
            Construction::Gray => "gray",
            Construction::Lift => "lift",
        }
    }
}

/// A synthesized strategy together with how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesis {
    pub strategy: Strategy,
    pub construction: Construction,
    /// The mod-p basis behind ruler constructions; empty for Gray codes.
    pub basis: Vec<ModVector>,
    pub p: Option<u64>,
    pub a: Option<u32>,
    pub b: Option<u32>,
}

fn is_full_rotation_group(group: &Group) -> bool {
    let n = group.n();
    group.order() == n as u64 && group.contains(&Permutation::rotation(n, 1))
}

fn check_length(n: usize, m: u64) -> Result<u64> {
    let len = optimal_length(n, m)?;
    if len > MAX_SYNTH_MOVES {
        return Err(Error::StateCapExceeded { cap: MAX_SYNTH_MOVES });
    }
    Ok(len)
}

/// Moves `y_i = x_{v_p(i)}` for `i = 1 … p^n − 1`.
fn ruler_moves(basis: &ZpBasis, n: usize) -> Result<Vec<ModVector>> {
    let p = basis.p();
    let len = check_length(n, p)?;
    (1..=len)
        .map(|i| Ok(basis.vectors()[vp(i, p)? as usize].clone()))
        .collect()
}

fn mod_p_basis(spec: &GameSpec, group: &Group, p: u64) -> Result<(ZpBasis, Construction)> {
    if is_full_rotation_group(group) {
        Ok((binomial_basis(p, spec.n())?, Construction::Binomial))
    } else {
        Ok((fixed_chain_basis(spec.gens(), p)?, Construction::FixedChain))
    }
}

/// Ruler-sequence strategy for a solvable game with prime modulus.
/// The trivial group is delegated to [`enumeration_strategy`].
pub fn synth_mod_p(spec: &GameSpec) -> Result<Strategy> {
    Ok(synth_mod_p_detailed(spec)?.strategy)
}

fn synth_mod_p_detailed(spec: &GameSpec) -> Result<Synthesis> {
    let group = perm::closure(spec.gens())?;
    let verdict = decide_for_group(spec, &group);
    if !verdict.solvable {
        return Err(Error::Unsolvable);
    }
    let p = spec.m();
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if group.is_trivial() {
        return enumeration_detailed(spec, &group);
    }
    let (basis, construction) = mod_p_basis(spec, &group, p)?;
    let moves = ruler_moves(&basis, spec.n())?;
    Ok(Synthesis {
        strategy: Strategy::new(spec.clone(), moves)?,
        construction,
        basis: basis.vectors().to_vec(),
        p: Some(p),
        a: verdict.a,
        b: Some(1),
    })
}

/// Combines a winning strategy modulo `p^(b−1)` with one modulo `p` into a
/// winning strategy modulo `p^b`.
///
/// With `B = p^((b−1)n)`, move `i` (1-based) is move `i / B` of `modp` when
/// `B | i` and `p` times move `i mod B` of `base` otherwise; residues are
/// embedded literally into `Z_{p^b}`.
pub fn lift_strategy(base: &Strategy, modp: &Strategy) -> Result<Strategy> {
    let p = modp.spec().m();
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if base.spec().gens() != modp.spec().gens() {
        return Err(Error::NotAGenerator);
    }
    let prev = base.spec().m();
    let b_minus_1 = arith::log_exact(prev, p).map_err(|_| Error::ModulusMismatch {
        expected: p,
        found: prev,
    })?;
    let n = base.spec().n();
    let block = arith::checked_pow(p, b_minus_1 as u64 * n as u64)?;
    let modp_len = optimal_length(n, p)?;
    if base.len() as u64 != block - 1 || modp.len() as u64 != modp_len {
        return Err(Error::LengthMismatch {
            expected: (block - 1) as usize,
            found: base.len(),
        });
    }
    let m = prev.checked_mul(p).ok_or(Error::Overflow)?;
    let total = check_length(n, m)?;
    let moves = (1..=total)
        .map(|i| {
            if i % block == 0 {
                modp.moves()[(i / block - 1) as usize].embed(m)
            } else {
                Ok(base.moves()[(i % block - 1) as usize].embed(m)?.scale(p))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Strategy::new(base.spec().with_modulus(m)?, moves)
}

/// For the trivial group: `m^n − 1` single-coordinate `±1` moves whose prefix
/// sums visit every nonzero configuration once, in reflected Gray order.
pub fn enumeration_strategy(spec: &GameSpec) -> Result<Strategy> {
    let group = perm::closure(spec.gens())?;
    Ok(enumeration_detailed(spec, &group)?.strategy)
}

fn enumeration_detailed(spec: &GameSpec, group: &Group) -> Result<Synthesis> {
    if !group.is_trivial() {
        return Err(Error::NontrivialGroup {
            order: group.order(),
        });
    }
    let (n, m) = (spec.n(), spec.m());
    let len = check_length(n, m)?;
    let mut digits = vec![0u64; n];
    let mut rising = vec![true; n];
    let mut moves = Vec::with_capacity(len as usize);
    loop {
        let mut i = 0;
        while i < n {
            let stuck = if rising[i] { digits[i] + 1 == m } else { digits[i] == 0 };
            if !stuck {
                break;
            }
            rising[i] = !rising[i];
            i += 1;
        }
        if i == n {
            break;
        }
        let mut y = ModVector::zeros(m, n);
        if rising[i] {
            digits[i] += 1;
            y = ModVector::unit(m, n, i);
        } else {
            digits[i] -= 1;
            y = y.sub(&ModVector::unit(m, n, i))?;
        }
        moves.push(y);
    }
    debug_assert_eq!(moves.len() as u64, len);
    Ok(Synthesis {
        strategy: Strategy::new(spec.clone(), moves)?,
        construction: Construction::Gray,
        basis: Vec::new(),
        p: None,
        a: None,
        b: None,
    })
}

/// A winning strategy of optimal length `m^n − 1` for any solvable game.
pub fn synth(spec: &GameSpec) -> Result<Strategy> {
    Ok(synthesize(spec)?.strategy)
}

/// [`synth`] with construction metadata.
pub fn synthesize(spec: &GameSpec) -> Result<Synthesis> {
    let group = perm::closure(spec.gens())?;
    let verdict = decide_for_group(spec, &group);
    match verdict.reason {
        Reason::MixedPrimes => Err(Error::Unsolvable),
        Reason::UnitModulus => Ok(Synthesis {
            strategy: Strategy::new(spec.clone(), Vec::new())?,
            construction: Construction::Gray,
            basis: Vec::new(),
            p: None,
            a: None,
            b: None,
        }),
        Reason::TrivialGroup => enumeration_detailed(spec, &group),
        Reason::PrimePowerMatch => {
            let p = verdict.p.expect("prime-power match carries p");
            let b = verdict.b.expect("prime-power match carries b");
            check_length(spec.n(), spec.m())?;
            let level1 = synth_mod_p_detailed(&spec.with_modulus(p)?)?;
            let modp = level1.strategy;
            let mut current = modp.clone();
            for _ in 1..b {
                current = lift_strategy(&current, &modp)?;
            }
            Ok(Synthesis {
                strategy: current,
                construction: if b > 1 { Construction::Lift } else { level1.construction },
                basis: level1.basis,
                p: Some(p),
                a: verdict.a,
                b: Some(b),
            })
        }
    }
}
