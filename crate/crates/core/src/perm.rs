//! Explicit permutations of `[n]×[n]` (entry permutations) and of `[n]`
//! (line permutations, used to build tensor products).
//!
//! Indices are 1-based at every public boundary, matching the usual matrix
//! convention; storage is a dense 0-based table of size `n²` so that
//! closed-form families, compositions and user-supplied tables all share one
//! representation.

use crate::error::{Error, Result};

/// A bijection of the pair set `{1,…,n} × {1,…,n}`.
///
/// Construction always validates bijectivity, so a held value is a
/// permutation by invariant. Values are immutable and can be shared freely
/// across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryPermutation {
    n: usize,
    /// map[r*n + c] = flat index of the image of (r+1, c+1).
    map: Vec<u32>,
}

impl EntryPermutation {
    /// Side length `n` of the index square.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identity(n: usize) -> Self {
        let map = (0..(n * n) as u32).collect();
        EntryPermutation { n, map }
    }

    /// The transpose `t(i,j) = (j,i)`.
    pub fn transpose(n: usize) -> Self {
        let mut map = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                map[r * n + c] = (c * n + r) as u32;
            }
        }
        EntryPermutation { n, map }
    }

    /// Builds from a rule on 1-based pairs, validating that the rule is a
    /// bijection onto `[n]²`.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> (usize, usize),
    {
        let mut map = vec![0u32; n * n];
        let mut source_of: Vec<u32> = vec![u32::MAX; n * n];
        for r in 0..n {
            for c in 0..n {
                let (p, q) = f(r + 1, c + 1);
                if p < 1 || p > n {
                    return Err(Error::IndexOutOfRange { value: p, max: n });
                }
                if q < 1 || q > n {
                    return Err(Error::IndexOutOfRange { value: q, max: n });
                }
                let t = (p - 1) * n + (q - 1);
                if source_of[t] != u32::MAX {
                    let s = source_of[t] as usize;
                    return Err(Error::DuplicateTarget {
                        i1: s / n + 1,
                        j1: s % n + 1,
                        i2: r + 1,
                        j2: c + 1,
                        p,
                        q,
                    });
                }
                source_of[t] = (r * n + c) as u32;
                map[r * n + c] = t as u32;
            }
        }
        Ok(EntryPermutation { n, map })
    }

    /// Builds from an explicit list of `(source, target)` pairs, all 1-based.
    /// Every source pair must appear exactly once; the first duplicated
    /// target is reported on failure.
    pub fn from_pairs(n: usize, pairs: &[((usize, usize), (usize, usize))]) -> Result<Self> {
        let mut table: Vec<Option<(usize, usize)>> = vec![None; n * n];
        for &((i, j), (p, q)) in pairs {
            for v in [i, j, p, q] {
                if v < 1 || v > n {
                    return Err(Error::IndexOutOfRange { value: v, max: n });
                }
            }
            table[(i - 1) * n + (j - 1)] = Some((p, q));
        }
        for (idx, slot) in table.iter().enumerate() {
            if slot.is_none() {
                return Err(Error::MissingSource {
                    i: idx / n + 1,
                    j: idx % n + 1,
                });
            }
        }
        EntryPermutation::from_fn(n, |i, j| table[(i - 1) * n + (j - 1)].unwrap())
    }

    /// Image of the 1-based pair `(i, j)`.
    ///
    /// Panics if an index is outside `1..=n`; the permutation is total on its
    /// declared square by construction.
    pub fn apply(&self, i: usize, j: usize) -> (usize, usize) {
        assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n);
        let t = self.map[(i - 1) * self.n + (j - 1)] as usize;
        (t / self.n + 1, t % self.n + 1)
    }

    #[inline]
    pub(crate) fn apply_flat(&self, idx: usize) -> usize {
        self.map[idx] as usize
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &EntryPermutation) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let map = other.map.iter().map(|&t| self.map[t as usize]).collect();
        Ok(EntryPermutation { n: self.n, map })
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0u32; self.map.len()];
        for (s, &t) in self.map.iter().enumerate() {
            map[t as usize] = s as u32;
        }
        EntryPermutation { n: self.n, map }
    }

    /// `t ∘ self ∘ t`, the scheme of the adjoint: `(G^σ)* = G^{t∘σ∘t}`.
    pub fn conjugate_by_t(&self) -> Self {
        let n = self.n;
        let mut map = vec![0u32; n * n];
        for r in 0..n {
            for c in 0..n {
                let t = self.map[c * n + r] as usize;
                let (p, q) = (t / n, t % n);
                map[r * n + c] = (q * n + p) as u32;
            }
        }
        EntryPermutation { n, map }
    }

    /// Uniformly random entry permutation from the given source.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut map: Vec<u32> = (0..(n * n) as u32).collect();
        map.shuffle(rng);
        EntryPermutation { n, map }
    }

    /// Whether `t∘σ∘t = σ`, equivalently whether `A ↦ A^σ` preserves
    /// Hermitian matrices.
    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetric_pair().is_none()
    }

    /// First 1-based pair witnessing `t∘σ∘t ≠ σ`, if any.
    pub fn first_asymmetric_pair(&self) -> Option<(usize, usize)> {
        let n = self.n;
        for r in 0..n {
            for c in 0..n {
                let t = self.map[c * n + r] as usize;
                let swapped = (t % n) * n + t / n;
                if self.map[r * n + c] as usize != swapped {
                    return Some((r + 1, c + 1));
                }
            }
        }
        None
    }
}

/// A bijection of `{1,…,n}`, the building block of tensor-product entry
/// permutations `φ⊗ψ (i,j) = (φ(i), ψ(j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinePerm {
    /// map[i] = 0-based image of i.
    map: Vec<u32>,
}

impl LinePerm {
    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn identity(n: usize) -> Self {
        LinePerm {
            map: (0..n as u32).collect(),
        }
    }

    /// The full cycle `i ↦ i+1 (mod n)`.
    pub fn cycle(n: usize) -> Self {
        Self::shift(n, 1)
    }

    /// `i ↦ i+k (mod n)`.
    pub fn shift(n: usize, k: usize) -> Self {
        LinePerm {
            map: (0..n).map(|i| ((i + k) % n) as u32).collect(),
        }
    }

    /// `i ↦ n+1-i`.
    pub fn reverse(n: usize) -> Self {
        LinePerm {
            map: (0..n).map(|i| (n - 1 - i) as u32).collect(),
        }
    }

    /// Builds from 1-based images, validating bijectivity.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut map = vec![0u32; n];
        for (i, &v) in images.iter().enumerate() {
            if v < 1 || v > n {
                return Err(Error::IndexOutOfRange { value: v, max: n });
            }
            if seen[v - 1] {
                return Err(Error::DuplicateTarget {
                    i1: map.iter().position(|&m| m == (v - 1) as u32).unwrap() + 1,
                    j1: 1,
                    i2: i + 1,
                    j2: 1,
                    p: v,
                    q: 1,
                });
            }
            seen[v - 1] = true;
            map[i] = (v - 1) as u32;
        }
        Ok(LinePerm { map })
    }

    /// Uniformly random line permutation from the given source.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut map: Vec<u32> = (0..n as u32).collect();
        map.shuffle(rng);
        LinePerm { map }
    }

    /// 1-based image of a 1-based index.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] as usize + 1
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0u32; self.map.len()];
        for (s, &t) in self.map.iter().enumerate() {
            map[t as usize] = s as u32;
        }
        LinePerm { map }
    }
}

/// The tensor product `φ⊗ψ` as an entry permutation.
pub fn tensor_perm(phi: &LinePerm, psi: &LinePerm) -> Result<EntryPermutation> {
    if phi.n() != psi.n() {
        return Err(Error::SizeMismatch {
            left: phi.n(),
            right: psi.n(),
        });
    }
    EntryPermutation::from_fn(phi.n(), |i, j| (phi.apply(i), psi.apply(j)))
}

/// Reduces `k ∈ [2n]` to its residue in `[n]`: the unique `p ∈ [n]` with
/// `k ≡ p (mod n)`.
pub fn fold_index(n: usize, k: usize) -> Result<usize> {
    if k < 1 || k > 2 * n {
        return Err(Error::IndexOutOfRange { value: k, max: 2 * n });
    }
    Ok((k - 1) % n + 1)
}

/// Seeded random permutations, shared by test modules across the crate.
#[cfg(test)]
pub(crate) mod tests_support {
    use super::{EntryPermutation, LinePerm};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_entry_perm(n: usize, rng: &mut ChaCha8Rng) -> EntryPermutation {
        EntryPermutation::random(n, rng)
    }

    pub(crate) fn random_line_perm(n: usize, rng: &mut ChaCha8Rng) -> LinePerm {
        LinePerm::random(n, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::{random_entry_perm, random_line_perm};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_fixes_pairs() {
        let id = EntryPermutation::identity(3);
        assert_eq!(id.apply(2, 3), (2, 3));
        let id1 = EntryPermutation::identity(1);
        assert_eq!(id1.apply(1, 1), (1, 1));
    }

    #[test]
    fn transpose_swaps_and_is_involutive() {
        let t = EntryPermutation::transpose(4);
        assert_eq!(t.apply(1, 3), (3, 1));
        let t2 = EntryPermutation::transpose(2);
        assert_eq!(t2.apply(2, 2), (2, 2));
        let t6 = EntryPermutation::transpose(6);
        assert_eq!(t6.compose(&t6).unwrap(), EntryPermutation::identity(6));
    }

    #[test]
    fn compose_identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sigma = random_entry_perm(3, &mut rng);
        let id = EntryPermutation::identity(3);
        assert_eq!(id.compose(&sigma).unwrap(), sigma);
        assert_eq!(sigma.compose(&id).unwrap(), sigma);
    }

    #[test]
    fn compose_size_mismatch_errors() {
        let a = EntryPermutation::identity(2);
        let b = EntryPermutation::identity(3);
        assert!(matches!(a.compose(&b), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn conjugation_fixes_identity_and_transpose() {
        for n in [1, 2, 5] {
            let id = EntryPermutation::identity(n);
            assert_eq!(id.conjugate_by_t(), id);
            let t = EntryPermutation::transpose(n);
            assert_eq!(t.conjugate_by_t(), t);
        }
    }

    #[test]
    fn conjugation_swaps_tensor_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = 4;
            let phi = random_line_perm(n, &mut rng);
            let psi = random_line_perm(n, &mut rng);
            let fwd = tensor_perm(&phi, &psi).unwrap();
            let swapped = tensor_perm(&psi, &phi).unwrap();
            assert_eq!(fwd.conjugate_by_t(), swapped);
        }
    }

    #[test]
    fn conjugation_is_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2, 3, 6] {
            let sigma = random_entry_perm(n, &mut rng);
            assert_eq!(sigma.conjugate_by_t().conjugate_by_t(), sigma);
        }
    }

    #[test]
    fn inverse_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sigma = random_entry_perm(5, &mut rng);
        assert_eq!(
            sigma.compose(&sigma.inverse()).unwrap(),
            EntryPermutation::identity(5)
        );
    }

    #[test]
    fn symmetry_detection() {
        assert!(EntryPermutation::identity(4).is_symmetric());
        assert!(EntryPermutation::transpose(4).is_symmetric());
        // A permutation moving (1,2) but fixing (2,1) is asymmetric.
        let asym = EntryPermutation::from_pairs(
            2,
            &[
                ((1, 1), (1, 2)),
                ((1, 2), (1, 1)),
                ((2, 1), (2, 1)),
                ((2, 2), (2, 2)),
            ],
        )
        .unwrap();
        assert!(!asym.is_symmetric());
        assert!(asym.first_asymmetric_pair().is_some());
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id = LinePerm::identity(3);
        assert_eq!(tensor_perm(&id, &id).unwrap(), EntryPermutation::identity(3));
    }

    #[test]
    fn tensor_applies_componentwise() {
        let phi = LinePerm::cycle(3); // 1→2→3→1
        let psi = LinePerm::identity(3);
        let tp = tensor_perm(&phi, &psi).unwrap();
        assert_eq!(tp.apply(1, 2), (2, 2));
    }

    #[test]
    fn from_pairs_reports_missing_and_duplicate() {
        let missing = EntryPermutation::from_pairs(
            2,
            &[((1, 1), (1, 1)), ((1, 2), (1, 2)), ((2, 1), (2, 1))],
        );
        assert!(matches!(missing, Err(Error::MissingSource { i: 2, j: 2 })));

        let dup = EntryPermutation::from_pairs(
            2,
            &[
                ((1, 1), (1, 1)),
                ((1, 2), (1, 1)),
                ((2, 1), (2, 1)),
                ((2, 2), (2, 2)),
            ],
        );
        match dup {
            Err(Error::DuplicateTarget { p, q, .. }) => assert_eq!((p, q), (1, 1)),
            other => panic!("expected duplicate-target error, got {other:?}"),
        }
    }

    #[test]
    fn fold_index_examples() {
        assert_eq!(fold_index(3, 3).unwrap(), 3);
        assert_eq!(fold_index(3, 4).unwrap(), 1);
        assert_eq!(fold_index(3, 6).unwrap(), 3);
        assert!(fold_index(3, 7).is_err());
        assert!(fold_index(3, 0).is_err());
    }

    #[test]
    fn random_builders_are_bijections() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 1..=8 {
            let p = random_entry_perm(n, &mut rng);
            let mut seen = vec![false; n * n];
            for i in 1..=n {
                for j in 1..=n {
                    let (a, b) = p.apply(i, j);
                    let idx = (a - 1) * n + (b - 1);
                    assert!(!seen[idx]);
                    seen[idx] = true;
                }
            }
        }
    }
}
