//! Belief sets and the transition kernel that advances them by one round.
//!
//! Configurations are encoded as base-`m` integers with position 0 as the
//! least significant digit. The kernel splits a code into fixed-width digit
//! chunks and maps each chunk through a per-generator lookup table, so the
//! image `g·x + y` of a configuration costs one table lookup per chunk.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::ModVector;
use crate::perm::{GeneratorSet, Permutation};

/// Spaces up to this many configurations are stored as dense bitsets.
pub const DENSE_LIMIT: u64 = 1 << 24;

/// Largest lookup table built per chunk.
const MAX_CHUNK_RADIX: u64 = 1 << 12;

/// Base-`m` positional encoding of `Z_m^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Encoder {
    m: u64,
    n: usize,
    size: u64,
}

impl Encoder {
    pub fn new(m: u64, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidResidue { value: 0, modulus: 0 });
        }
        let size = arith::checked_pow(m, n as u64).map_err(|_| Error::StateCapExceeded { cap: u64::MAX })?;
        Ok(Encoder { m, n, size })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn encode(&self, x: &ModVector) -> u64 {
        x.entries().iter().rev().fold(0, |acc, &d| acc * self.m + d)
    }

    pub fn decode(&self, mut code: u64) -> ModVector {
        let mut entries = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            entries.push(code % self.m);
            code /= self.m;
        }
        ModVector::new(self.m, entries).expect("digits are reduced")
    }

    fn check(&self, x: &ModVector) -> Result<()> {
        if x.modulus() != self.m {
            return Err(Error::ModulusMismatch {
                expected: self.m,
                found: x.modulus(),
            });
        }
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Fixed-size bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSet {
    words: Vec<u64>,
    len: u64,
}

impl DenseSet {
    pub fn new(len: u64) -> Self {
        DenseSet {
            words: vec![0; len.div_ceil(64) as usize],
            len,
        }
    }

    /// Every element of `0..len` except zero.
    pub fn all_but_zero(len: u64) -> Self {
        let mut s = DenseSet {
            words: vec![u64::MAX; len.div_ceil(64) as usize],
            len,
        };
        let tail = len % 64;
        if tail != 0 {
            *s.words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        if len > 0 {
            s.remove(0);
        }
        s
    }

    pub fn capacity(&self) -> u64 {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: u64) {
        self.words[(i >> 6) as usize] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        i < self.len && self.words[(i >> 6) as usize] & (1 << (i & 63)) != 0
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &DenseSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        iter_words(&self.words, 0)
    }

    pub fn first(&self) -> Option<u64> {
        self.iter().next()
    }
}

fn iter_words(words: &[u64], base: usize) -> impl Iterator<Item = u64> + '_ {
    words.iter().enumerate().flat_map(move |(wi, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let bit = w.trailing_zeros() as u64;
            w &= w - 1;
            Some(((base + wi) as u64) * 64 + bit)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Dense(DenseSet),
    Sparse(BTreeSet<u64>),
}

/// Configurations still consistent with "the player has not won yet".
/// Never contains the zero configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefState {
    enc: Encoder,
    repr: Repr,
}

impl BeliefState {
    pub fn empty(m: u64, n: usize) -> Result<Self> {
        let enc = Encoder::new(m, n)?;
        let repr = if enc.size <= DENSE_LIMIT {
            Repr::Dense(DenseSet::new(enc.size))
        } else {
            Repr::Sparse(BTreeSet::new())
        };
        Ok(BeliefState { enc, repr })
    }

    /// All nonzero configurations of `Z_m^n`.
    pub fn all_nonzero(m: u64, n: usize) -> Result<Self> {
        let enc = Encoder::new(m, n)?;
        let repr = if enc.size <= DENSE_LIMIT {
            Repr::Dense(DenseSet::all_but_zero(enc.size))
        } else {
            Repr::Sparse((1..enc.size).collect())
        };
        Ok(BeliefState { enc, repr })
    }

    pub fn from_configs<'a>(m: u64, n: usize, configs: impl IntoIterator<Item = &'a ModVector>) -> Result<Self> {
        let mut b = Self::empty(m, n)?;
        for x in configs {
            b.enc.check(x)?;
            let code = b.enc.encode(x);
            if code != 0 {
                b.insert_code(code);
            }
        }
        Ok(b)
    }

    pub fn encoder(&self) -> Encoder {
        self.enc
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    pub fn dense(&self) -> Option<&DenseSet> {
        match &self.repr {
            Repr::Dense(d) => Some(d),
            Repr::Sparse(_) => None,
        }
    }

    fn insert_code(&mut self, code: u64) {
        match &mut self.repr {
            Repr::Dense(d) => d.insert(code),
            Repr::Sparse(s) => {
                s.insert(code);
            }
        }
    }

    pub fn contains_code(&self, code: u64) -> bool {
        match &self.repr {
            Repr::Dense(d) => d.contains(code),
            Repr::Sparse(s) => s.contains(&code),
        }
    }

    pub fn contains(&self, x: &ModVector) -> bool {
        self.enc.check(x).is_ok() && self.contains_code(self.enc.encode(x))
    }

    pub fn len(&self) -> u64 {
        match &self.repr {
            Repr::Dense(d) => d.count(),
            Repr::Sparse(s) => s.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Dense(d) => d.is_empty(),
            Repr::Sparse(s) => s.is_empty(),
        }
    }

    /// Codes in increasing order.
    pub fn codes(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Dense(d) => d.iter().collect(),
            Repr::Sparse(s) => s.iter().copied().collect(),
        }
    }

    pub fn configs(&self) -> Vec<ModVector> {
        self.codes().into_iter().map(|c| self.enc.decode(c)).collect()
    }

    /// `{ g·x + y : x ∈ self, g ∈ perms } \ {0}` using the given kernel.
    pub(crate) fn step_with(&self, kernel: &StepKernel, exec: &dyn StepExecutor) -> BeliefState {
        let repr = match &self.repr {
            Repr::Dense(d) => {
                let mut out = exec.step(kernel, d);
                if out.capacity() > 0 {
                    out.remove(0);
                }
                Repr::Dense(out)
            }
            Repr::Sparse(s) => {
                let mut out = BTreeSet::new();
                let mut chunks = [0u64; 64];
                for &code in s {
                    kernel.split(code, &mut chunks);
                    for g in 0..kernel.gens {
                        out.insert(kernel.image(g, &chunks));
                    }
                }
                out.remove(&0);
                Repr::Sparse(out)
            }
        };
        BeliefState { enc: self.enc, repr }
    }
}

/// Precomputed map `x ↦ g·x + y` for every `g` in a permutation list and one move `y`.
#[derive(Debug, Clone)]
pub struct StepKernel {
    gens: usize,
    chunks: usize,
    width: usize,
    radix: u64,
    tables: Vec<u64>,
}

impl StepKernel {
    /// `perms` act on `enc.n()` positions; `y` is the move added after permuting.
    pub fn new(enc: &Encoder, perms: &[Permutation], y: &ModVector) -> Result<Self> {
        enc.check(y)?;
        if let Some(bad) = perms.iter().find(|p| p.len() != enc.n) {
            return Err(Error::LengthMismatch {
                expected: enc.n,
                found: bad.len(),
            });
        }
        let (width, radix) = choose_chunking(enc, perms.len());
        let chunks = if enc.n == 0 { 0 } else { enc.n.div_ceil(width) };
        let m = enc.m;
        let mut place = Vec::with_capacity(enc.n);
        let mut pw = 1u64;
        for _ in 0..enc.n {
            place.push(pw);
            pw = pw.wrapping_mul(m);
        }
        let ys = y.entries();
        let mut tables = vec![0u64; perms.len() * chunks * radix as usize];
        for (gi, g) in perms.iter().enumerate() {
            for c in 0..chunks {
                let lo = c * width;
                let hi = (lo + width).min(enc.n);
                let base = (gi * chunks + c) * radix as usize;
                let live = arith::checked_pow(m, (hi - lo) as u64).expect("chunk radix fits") as usize;
                let table = &mut tables[base..base + live];
                let mut digits = vec![0u64; hi - lo];
                for entry in table.iter_mut() {
                    let mut acc = 0u64;
                    for (t, &d) in digits.iter().enumerate() {
                        let j = g.apply(lo + t);
                        acc += (d + ys[j]) % m * place[j];
                    }
                    *entry = acc;
                    // advance the mixed-radix counter
                    for d in digits.iter_mut() {
                        *d += 1;
                        if *d < m {
                            break;
                        }
                        *d = 0;
                    }
                }
            }
        }
        Ok(StepKernel {
            gens: perms.len(),
            chunks,
            width,
            radix,
            tables,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn chunk_width(&self) -> usize {
        self.width
    }

    #[inline]
    fn split(&self, mut code: u64, out: &mut [u64; 64]) {
        for slot in out.iter_mut().take(self.chunks) {
            *slot = code % self.radix;
            code /= self.radix;
        }
    }

    #[inline]
    fn image(&self, g: usize, chunks: &[u64; 64]) -> u64 {
        let base = g * self.chunks;
        let r = self.radix as usize;
        let mut acc = 0;
        for (c, &v) in chunks.iter().enumerate().take(self.chunks) {
            acc += self.tables[(base + c) * r + v as usize];
        }
        acc
    }

    /// Image of a single code under generator index `g`.
    pub fn apply(&self, g: usize, code: u64) -> u64 {
        let mut chunks = [0u64; 64];
        self.split(code, &mut chunks);
        self.image(g, &chunks)
    }

    /// Inserts the images of every member of `src` whose bit lies in the given
    /// word range into `dst`. Zero is not removed here.
    pub fn apply_words(&self, src: &DenseSet, words: Range<usize>, dst: &mut DenseSet) {
        let mut chunks = [0u64; 64];
        let start = words.start;
        for code in iter_words(&src.words[words], start) {
            self.split(code, &mut chunks);
            for g in 0..self.gens {
                dst.insert(self.image(g, &chunks));
            }
        }
    }
}

/// Picks the digit-chunk width minimizing lookups plus table construction.
fn choose_chunking(enc: &Encoder, gens: usize) -> (usize, u64) {
    if enc.n == 0 || enc.m == 1 {
        return (1, enc.m.max(1));
    }
    let mut best = (1usize, enc.m, u128::MAX);
    let mut radix = 1u64;
    for width in 1..=enc.n {
        radix = match radix.checked_mul(enc.m) {
            Some(r) if r <= MAX_CHUNK_RADIX => r,
            _ => break,
        };
        let chunks = enc.n.div_ceil(width) as u128;
        let cost = chunks * enc.size as u128 + gens as u128 * chunks * radix as u128;
        if cost < best.2 {
            best = (width, radix, cost);
        }
    }
    (best.0, best.1)
}

/// Strategy for running one dense belief step; lets callers parallelize.
pub trait StepExecutor {
    /// All images of `src` under `kernel` (zero included if produced).
    fn step(&self, kernel: &StepKernel, src: &DenseSet) -> DenseSet;
}

/// Single-threaded executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl StepExecutor for Sequential {
    fn step(&self, kernel: &StepKernel, src: &DenseSet) -> DenseSet {
        let mut out = DenseSet::new(src.capacity());
        kernel.apply_words(src, 0..src.words().len(), &mut out);
        out
    }
}

/// One round of the game applied to a belief set: permute by any listed
/// generator, add `y`, drop the zero configuration.
pub fn belief_step(belief: &BeliefState, y: &ModVector, gens: &GeneratorSet) -> Result<BeliefState> {
    let kernel = StepKernel::new(&belief.enc, gens.perms(), y)?;
    Ok(belief.step_with(&kernel, &Sequential))
}
