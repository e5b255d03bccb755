//! Exact linear algebra over `Z_p` and residue vectors over `Z_m`.
//!
//! Matrices are plain row lists of residues. Row reduction pivots on the
//! lowest column index first and on the first usable row, so every basis
//! produced here is deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::perm::{self, GeneratorSet, Permutation};

/// A length-`n` vector of residues modulo `m`: a configuration or a move.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModVector {
    modulus: u64,
    entries: Vec<u64>,
}

impl fmt::Debug for ModVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.entries, self.modulus)
    }
}

impl ModVector {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidResidue { value: 0, modulus });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= modulus) {
            return Err(Error::InvalidResidue {
                value: bad,
                modulus,
            });
        }
        Ok(ModVector { modulus, entries })
    }

    /// Reduces arbitrary integers into `[0, m)`.
    pub fn from_reduced(modulus: u64, entries: impl IntoIterator<Item = u64>) -> Self {
        ModVector {
            modulus,
            entries: entries.into_iter().map(|e| e % modulus).collect(),
        }
    }

    pub fn zeros(modulus: u64, n: usize) -> Self {
        ModVector {
            modulus,
            entries: vec![0; n],
        }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(modulus: u64, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(modulus, n);
        v.entries[i] = 1 % modulus;
        v
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &ModVector) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ModVector) -> Result<ModVector> {
        self.check_compatible(other)?;
        let m = self.modulus;
        Ok(ModVector {
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % m)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ModVector) -> Result<ModVector> {
        self.check_compatible(other)?;
        let m = self.modulus;
        Ok(ModVector {
            modulus: m,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
        })
    }

    pub fn neg(&self) -> ModVector {
        let m = self.modulus;
        ModVector {
            modulus: m,
            entries: self.entries.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> ModVector {
        let m = self.modulus as u128;
        ModVector {
            modulus: self.modulus,
            entries: self
                .entries
                .iter()
                .map(|&a| ((a as u128 * k as u128) % m) as u64)
                .collect(),
        }
    }

    /// Reduction `Z_m -> Z_b`; `b` must divide `m`.
    pub fn project(&self, b: u64) -> Result<ModVector> {
        if b == 0 || !self.modulus.is_multiple_of(b) {
            return Err(Error::NotADivisor {
                divisor: b,
                of: self.modulus,
            });
        }
        Ok(ModVector::from_reduced(b, self.entries.iter().copied()))
    }

    /// Reinterprets the residues literally in `Z_target`; `target` must be at least `m`.
    pub fn embed(&self, target: u64) -> Result<ModVector> {
        ModVector::new(target, self.entries.clone())
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn select(&self, coords: &[usize]) -> Result<ModVector> {
        let entries = coords
            .iter()
            .map(|&c| {
                self.entries.get(c).copied().ok_or(Error::IndexOutOfRange {
                    index: c,
                    len: self.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModVector {
            modulus: self.modulus,
            entries,
        })
    }

    /// Coordinate permutation: the entry at position `i` moves to `g(i)`.
    pub fn permuted(&self, g: &Permutation) -> Result<ModVector> {
        if g.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: g.len(),
            });
        }
        let mut out = vec![0; self.len()];
        for (i, &e) in self.entries.iter().enumerate() {
            out[g.apply(i)] = e;
        }
        Ok(ModVector {
            modulus: self.modulus,
            entries: out,
        })
    }
}

/// An ordered basis `x_0, …, x_{n-1}` of `Z_p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpBasis {
    p: u64,
    vectors: Vec<ModVector>,
}

impl ZpBasis {
    /// Checks primality, shapes and full rank.
    pub fn new(p: u64, vectors: Vec<ModVector>) -> Result<Self> {
        ensure_prime(p)?;
        let n = vectors.len();
        for v in &vectors {
            if v.modulus() != p {
                return Err(Error::ModulusMismatch {
                    expected: p,
                    found: v.modulus(),
                });
            }
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        let rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.entries.clone()).collect();
        let (_, pivots) = rref(rows, n, p);
        if pivots.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: pivots.len(),
            });
        }
        Ok(ZpBasis { p, vectors })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vectors(&self) -> &[ModVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates of `x` in this basis.
    pub fn coordinates(&self, x: &ModVector) -> Result<Vec<u64>> {
        solve_in_span(&self.vectors, x)?.ok_or(Error::LengthMismatch {
            expected: self.len(),
            found: x.len(),
        })
    }

    /// True when `g·x_j − x_j ∈ span(x_0, …, x_{j-1})` for every generator and every `j`.
    pub fn has_chain_property(&self, gens: &GeneratorSet) -> Result<bool> {
        for g in gens.perms() {
            for (j, x) in self.vectors.iter().enumerate() {
                let diff = x.permuted(g)?.sub(x)?;
                if solve_in_span(&self.vectors[..j], &diff)?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn ensure_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Largest `e` with `p^e | i`.
pub fn vp(i: u64, p: u64) -> Result<u32> {
    if i == 0 {
        return Err(Error::ZeroValuation);
    }
    ensure_prime(p)?;
    let mut i = i;
    let mut e = 0;
    while i.is_multiple_of(p) {
        i /= p;
        e += 1;
    }
    Ok(e)
}

/// Vectors `x_j` with `x_j[i] = C(i, j) mod p`, for `n` a power of `p`.
pub fn binomial_basis(p: u64, n: usize) -> Result<ZpBasis> {
    ensure_prime(p)?;
    arith::log_exact(n as u64, p)?;
    // pascal[i][j] = C(i, j) mod p
    let mut pascal = vec![vec![0u64; n]; n];
    for i in 0..n {
        pascal[i][0] = 1;
        for j in 1..=i {
            pascal[i][j] = (pascal[i - 1][j - 1] + if j < i { pascal[i - 1][j] } else { 0 }) % p;
        }
    }
    let vectors = (0..n)
        .map(|j| ModVector {
            modulus: p,
            entries: (0..n).map(|i| pascal[i][j]).collect(),
        })
        .collect();
    Ok(ZpBasis { p, vectors })
}

/// Reduced row echelon form over `Z_p`. Returns the reduced rows (zero rows
/// dropped) and the pivot column of each.
fn rref(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, found);
        let inv = arith::inv_mod(rows[r][col], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col] == 0 {
                continue;
            }
            let f = rows[i][col];
            for c in 0..rows[i].len() {
                rows[i][c] = (rows[i][c] + p * p - f * rows[r][c] % p) % p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{ x : A x = 0 }`, one vector per free column in increasing order.
fn kernel(rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let (reduced, pivots) = rref(rows, ncols, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `Σ c_j v_j = target` over `Z_p`, or `None` when the
/// target is outside the span. Free coefficients are set to zero.
pub fn solve_in_span(vectors: &[ModVector], target: &ModVector) -> Result<Option<Vec<u64>>> {
    let p = target.modulus();
    ensure_prime(p)?;
    let n = target.len();
    for v in vectors {
        target.check_compatible(v)?;
    }
    let k = vectors.len();
    // augmented n x (k + 1) system, one row per coordinate
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = vectors.iter().map(|v| v.entries[i]).collect();
            row.push(target.entries[i]);
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, k + 1, p);
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![0; k];
    for (row, &pc) in reduced.iter().zip(&pivots) {
        coeffs[pc] = row[k];
    }
    Ok(Some(coeffs))
}

/// Rows of the stacked system `(P_g − I) x = 0` over all generators.
fn fixed_rows(gens: &GeneratorSet, p: u64) -> Vec<Vec<u64>> {
    let n = gens.n();
    let mut rows = Vec::new();
    for g in gens.perms() {
        if g.is_identity() {
            continue;
        }
        // (g·x)_{g(i)} = x_i, so row g(i) reads x_i − x_{g(i)}
        for i in 0..n {
            let j = g.apply(i);
            if i == j {
                continue;
            }
            let mut row = vec![0; n];
            row[i] = 1;
            row[j] = p - 1;
            rows.push(row);
        }
    }
    rows
}

/// Basis of the vectors fixed by every generator (equivalently by the whole group).
pub fn fixed_space(gens: &GeneratorSet, p: u64) -> Result<Vec<ModVector>> {
    ensure_prime(p)?;
    Ok(kernel(fixed_rows(gens, p), gens.n(), p)
        .into_iter()
        .map(|entries| ModVector {
            modulus: p,
            entries,
        })
        .collect())
}

/// Builds a basis whose partial spans form a chain of invariant subspaces.
///
/// Each new vector is a fixed point of the group acting on the quotient by
/// the span chosen so far. The quotient is coordinatized by completing the
/// chosen vectors with the standard vectors at the non-pivot columns of their
/// echelon form; the fixed vector found there is lifted by zero extension.
pub fn fixed_chain_basis(gens: &GeneratorSet, p: u64) -> Result<ZpBasis> {
    ensure_prime(p)?;
    let order = perm::closure(gens)?.order();
    arith::log_exact(order, p)?;
    let n = gens.n();
    let mut chosen: Vec<ModVector> = Vec::with_capacity(n);
    while chosen.len() < n {
        let k = chosen.len();
        let rows = chosen.iter().map(|v| v.entries.clone()).collect();
        let (_, pivots) = rref(rows, n, p);
        let complement: Vec<ModVector> = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|c| ModVector::unit(p, n, c))
            .collect();
        let full: Vec<ModVector> = chosen.iter().chain(&complement).cloned().collect();
        let q = complement.len();
        // stacked (M_g − I) over the quotient coordinates
        let mut system = Vec::new();
        for g in gens.perms() {
            let mut m_g = vec![vec![0u64; q]; q];
            for (col, w) in complement.iter().enumerate() {
                let coords = solve_in_span(&full, &w.permuted(g)?)?
                    .expect("completed basis spans the whole space");
                for row in 0..q {
                    m_g[row][col] = coords[k + row];
                }
            }
            for (row, mut r) in m_g.into_iter().enumerate() {
                r[row] = (r[row] + p - 1) % p;
                system.push(r);
            }
        }
        let fixed = kernel(system, q, p);
        let Some(u) = fixed.first() else {
            return Err(Error::NoFixedVector { chosen: k });
        };
        let mut lifted = ModVector::zeros(p, n);
        for (coef, w) in u.iter().zip(&complement) {
            lifted = lifted.add(&w.scale(*coef))?;
        }
        chosen.push(lifted);
    }
    Ok(ZpBasis { p, vectors: chosen })
}
