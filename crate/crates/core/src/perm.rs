//! Permutations of table positions and the groups they generate.
//!
//! Positions are 0-based. A [`Permutation`] is stored in image form: entry
//! `i` is the position that the counter at position `i` is moved to.
//! Composition is fixed globally as `(a ∘ b)(i) = a(b(i))`, so `b` acts
//! first; every product in this crate follows that convention.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;
use crate::error::{Error, Result};

/// Default upper bound on the number of group elements materialized by [`closure`].
pub const DEFAULT_GROUP_CAP: usize = 100_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl Permutation {
    /// Validates that `images` is a bijection on `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation);
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Rotation of an `n`-gon sending position `i` to `i + k (mod n)`.
    pub fn rotation(n: usize, k: usize) -> Self {
        Permutation((0..n).map(|i| (i + k) % n).collect())
    }

    /// Number of positions acted on.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Permutation {
        inverse(self)
    }

    pub fn order(&self) -> u64 {
        element_order(self)
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut acc = Permutation::identity(self.len());
        for _ in 0..k {
            acc = compose_unchecked(self, &acc);
        }
        acc
    }

    /// Smallest position that is not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &j)| *i != j).map(|(i, _)| i)
    }
}

fn compose_unchecked(a: &Permutation, b: &Permutation) -> Permutation {
    Permutation(b.0.iter().map(|&i| a.0[i]).collect())
}

/// `result(i) = a(b(i))`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(compose_unchecked(a, b))
}

pub fn inverse(a: &Permutation) -> Permutation {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.0.iter().enumerate() {
        inv[j] = i;
    }
    Permutation(inv)
}

/// Smallest `k >= 1` with `a^k = identity`: the lcm of the cycle lengths.
pub fn element_order(a: &Permutation) -> u64 {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut order = 1u64;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = a.0[i];
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// The input set `S` of permutations the table may apply each turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    perms: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn new(n: usize, perms: Vec<Permutation>) -> Result<Self> {
        if let Some(bad) = perms.iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(GeneratorSet { n, perms })
    }

    /// All `n` rotations of the table, identity first.
    pub fn rotations(n: usize) -> Self {
        GeneratorSet {
            n,
            perms: (0..n.max(1)).map(|k| Permutation::rotation(n, k)).collect(),
        }
    }

    pub fn trivial(n: usize) -> Self {
        GeneratorSet {
            n,
            perms: vec![Permutation::identity(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.perms.contains(p)
    }

    pub fn contains_identity(&self) -> bool {
        self.perms.iter().any(Permutation::is_identity)
    }

    /// Prepends the identity when it is missing; otherwise returns `self` unchanged.
    pub fn with_identity(mut self) -> Self {
        if !self.contains_identity() {
            self.perms.insert(0, Permutation::identity(self.n));
        }
        self
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.perms.iter().position(|q| q == p)
    }

    /// `T = { s^-1 : s ∈ S }`, in the order of `S`.
    pub fn inverses(&self) -> Vec<Permutation> {
        self.perms.iter().map(inverse).collect()
    }

    /// True when `self` lists exactly the `n` rotations of the table (in any order).
    pub fn is_rotations(&self) -> bool {
        let mut ks: Vec<usize> = Vec::with_capacity(self.perms.len());
        for p in &self.perms {
            let k = if self.n == 0 { 0 } else { p.apply(0) };
            if *p != Permutation::rotation(self.n, k) {
                return false;
            }
            ks.push(k);
        }
        ks.sort_unstable();
        ks.dedup();
        ks.len() == self.n.max(1) && ks.len() == self.perms.len()
    }
}

/// A materialized permutation group in BFS insertion order, identity first.
#[derive(Debug, Clone)]
pub struct Group {
    n: usize,
    elements: Vec<Permutation>,
    index: BTreeMap<Permutation, usize>,
}

impl Group {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The orbit of `pos`, sorted.
    pub fn orbit(&self, pos: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.elements.iter().map(|g| g.apply(pos)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// Closure of `S` under composition with the default element cap.
pub fn closure(gens: &GeneratorSet) -> Result<Group> {
    closure_with_cap(gens, DEFAULT_GROUP_CAP)
}

/// Breadth-first closure starting from the identity; each dequeued element
/// `e` is extended by `s ∘ e` for every generator `s` in listed order.
pub fn closure_with_cap(gens: &GeneratorSet, cap: usize) -> Result<Group> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let id = Permutation::identity(gens.n);
    let mut elements = vec![id.clone()];
    let mut index = BTreeMap::new();
    index.insert(id, 0);
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for s in &gens.perms {
            let h = compose_unchecked(s, &e);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
    }
    Ok(Group {
        n: gens.n,
        elements,
        index,
    })
}

/// Rewrites `S` as `t^-1 · S` so the result contains the identity.
pub fn normalize_generators(gens: &GeneratorSet, t: &Permutation) -> Result<GeneratorSet> {
    if !gens.contains(t) {
        return Err(Error::NotAGenerator);
    }
    let t_inv = inverse(t);
    let perms = gens
        .perms
        .iter()
        .map(|s| compose_unchecked(&t_inv, s))
        .collect();
    Ok(GeneratorSet { n: gens.n, perms })
}

/// First element of `G` (in closure order) whose order is divisible by `p`,
/// raised to `order / p`. The result has order exactly `p`.
pub fn cauchy_element(group: &Group, p: u64) -> Result<Permutation> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !group.order().is_multiple_of(p) {
        return Err(Error::NoCauchyElement {
            p,
            order: group.order(),
        });
    }
    group
        .elements
        .iter()
        .find_map(|g| {
            let k = element_order(g);
            k.is_multiple_of(p).then(|| g.pow(k / p))
        })
        .ok_or(Error::NoCauchyElement {
            p,
            order: group.order(),
        })
}

/// The family `{ g(c^i(x0)) : 0 <= i < p }` over all `g ∈ G`, deduplicated.
///
/// `x0` is the smallest position moved by `c` (position 0 whenever `c`
/// moves it). Each block is sorted and the family is sorted
/// lexicographically. Positions outside the orbit of `x0` appear in no block.
pub fn cyclic_blocks(group: &Group, c: &Permutation, p: u64) -> Result<Vec<Vec<usize>>> {
    if !group.contains(c) {
        return Err(Error::NotAMember);
    }
    let order = element_order(c);
    if order != p {
        return Err(Error::WrongOrder {
            expected: p,
            found: order,
        });
    }
    let Some(x0) = c.first_moved() else {
        return Ok(Vec::new());
    };
    let mut cycle = Vec::with_capacity(p as usize);
    let mut x = x0;
    for _ in 0..p {
        cycle.push(x);
        x = c.apply(x);
    }
    let mut blocks: Vec<Vec<usize>> = group
        .elements
        .iter()
        .map(|g| {
            let mut b: Vec<usize> = cycle.iter().map(|&i| g.apply(i)).collect();
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort();
    blocks.dedup();
    Ok(blocks)
}
