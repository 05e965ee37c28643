//! Pair partitions of `[m]`, crossings, and the constrained non-crossing
//! counts that predict limiting moments.
//!
//! A pair partition (pairing) is a fixed-point-free involution of `[m]`. The
//! non-crossing ones are counted by Catalan numbers; with per-position labels
//! and star flags attached, the surviving non-crossing pairings count the
//! limit of `E∘tr` for the corresponding word of free semicircular and
//! circular variables.

use crate::error::{Error, Result};
use crate::schemes::SchemeKind;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Enumeration guard: (m−1)!! reaches 2,027,025 at m = 16, the largest
/// desk-scale enumeration supported. Larger m is an explicit error.
pub const MAX_PAIRING_LEN: usize = 16;

/// A fixed-point-free involution of `[m]`, `m` even, `m ≤ 16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairPartition {
    m: usize,
    /// mate[k] = partner of k, 0-based.
    mate: [u8; MAX_PAIRING_LEN],
}

impl PairPartition {
    /// Builds from 1-based blocks, e.g. `&[(1,4),(2,3)]`.
    pub fn from_blocks(m: usize, blocks: &[(usize, usize)]) -> Result<Self> {
        if m % 2 == 1 {
            return Err(Error::OddPairingLength { m });
        }
        if m > MAX_PAIRING_LEN {
            return Err(Error::PairingTooLong {
                m,
                max: MAX_PAIRING_LEN,
            });
        }
        let mut mate = [u8::MAX; MAX_PAIRING_LEN];
        for &(a, b) in blocks {
            if a < 1 || a > m {
                return Err(Error::IndexOutOfRange { value: a, max: m });
            }
            if b < 1 || b > m {
                return Err(Error::IndexOutOfRange { value: b, max: m });
            }
            if a == b || mate[a - 1] != u8::MAX || mate[b - 1] != u8::MAX {
                return Err(Error::TableParse {
                    line: 0,
                    message: format!("blocks do not form a pairing at ({a},{b})"),
                });
            }
            mate[a - 1] = (b - 1) as u8;
            mate[b - 1] = (a - 1) as u8;
        }
        if mate[..m].iter().any(|&x| x == u8::MAX) {
            return Err(Error::TableParse {
                line: 0,
                message: "blocks do not cover [m]".into(),
            });
        }
        Ok(PairPartition { m, mate })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Partner of `k`, 0-based.
    #[inline]
    pub fn mate(&self, k: usize) -> usize {
        debug_assert!(k < self.m);
        self.mate[k] as usize
    }

    /// Blocks as 1-based pairs `(k, mate(k))` with `k < mate(k)`, sorted.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .filter(|&k| k < self.mate(k))
            .map(|k| (k + 1, self.mate(k) + 1))
            .collect()
    }

    /// Whether no two blocks cross: a crossing is a 4-tuple
    /// `a < b < π(a) < π(b)`.
    pub fn is_noncrossing(&self) -> bool {
        let blocks = self.blocks();
        for (idx, &(a, c)) in blocks.iter().enumerate() {
            for &(b, d) in &blocks[idx + 1..] {
                if a < b && b < c && c < d {
                    return false;
                }
            }
        }
        true
    }
}

impl Serialize for PairPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self.blocks();
        let mut seq = serializer.serialize_seq(Some(blocks.len()))?;
        for b in blocks {
            seq.serialize_element(&[b.0, b.1])?;
        }
        seq.end()
    }
}

fn check_even_and_bounded(m: usize) -> Result<()> {
    if m % 2 == 1 {
        return Err(Error::OddPairingLength { m });
    }
    if m > MAX_PAIRING_LEN {
        return Err(Error::PairingTooLong {
            m,
            max: MAX_PAIRING_LEN,
        });
    }
    Ok(())
}

/// Visits every pairing of `[m]` exactly once, in the canonical order: the
/// smallest unpaired element is matched with each larger free element in
/// increasing order, recursively.
pub fn for_each_pairing<F: FnMut(&PairPartition)>(m: usize, mut f: F) -> Result<()> {
    check_even_and_bounded(m)?;
    let mut mate = [u8::MAX; MAX_PAIRING_LEN];
    fn rec<F: FnMut(&PairPartition)>(m: usize, mate: &mut [u8; MAX_PAIRING_LEN], f: &mut F) {
        let first = match mate[..m].iter().position(|&x| x == u8::MAX) {
            Some(k) => k,
            None => {
                f(&PairPartition { m, mate: *mate });
                return;
            }
        };
        for partner in first + 1..m {
            if mate[partner] == u8::MAX {
                mate[first] = partner as u8;
                mate[partner] = first as u8;
                rec(m, mate, f);
                mate[first] = u8::MAX;
                mate[partner] = u8::MAX;
            }
        }
    }
    rec(m, &mut mate, &mut f);
    Ok(())
}

/// All `(m−1)!!` pairings of `[m]` in canonical order.
pub fn enumerate_pairings(m: usize) -> Result<Vec<PairPartition>> {
    let mut out = Vec::new();
    for_each_pairing(m, |p| out.push(*p))?;
    Ok(out)
}

/// `#NC₂(m)`, the number of non-crossing pairings (a Catalan number).
pub fn count_nc2(m: usize) -> Result<u64> {
    let mut count = 0u64;
    for_each_pairing(m, |p| {
        if p.is_noncrossing() {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Limit kind of one word letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Semicircular,
    Circular,
}

impl From<SchemeKind> for VarKind {
    fn from(k: SchemeKind) -> Self {
        match k {
            SchemeKind::Symmetric => VarKind::Semicircular,
            SchemeKind::JSmall => VarKind::Circular,
        }
    }
}

/// A word shape: per-position labels with star flags, and a kind per label.
/// Semicircular letters are self-adjoint, so stars on them are rejected.
#[derive(Debug, Clone)]
pub struct WordSignature {
    labels: Vec<String>,
    stars: Vec<bool>,
    kinds: Vec<VarKind>,
}

impl WordSignature {
    pub fn new(letters: &[(String, bool, VarKind)]) -> Result<Self> {
        for (label, star, kind) in letters {
            if *star && *kind == VarKind::Semicircular {
                return Err(Error::StarOnSemicircular {
                    label: label.clone(),
                });
            }
        }
        Ok(WordSignature {
            labels: letters.iter().map(|(l, _, _)| l.clone()).collect(),
            stars: letters.iter().map(|(_, s, _)| *s).collect(),
            kinds: letters.iter().map(|(_, _, k)| *k).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Whether a block `(k, l)` is allowed: labels must match, and circular
    /// letters must pair a starred with an unstarred occurrence.
    fn block_allowed(&self, k: usize, l: usize) -> bool {
        if self.labels[k] != self.labels[l] {
            return false;
        }
        match self.kinds[k] {
            VarKind::Semicircular => true,
            VarKind::Circular => self.stars[k] != self.stars[l],
        }
    }
}

/// Counts the non-crossing pairings compatible with a word signature: every
/// block connects equal labels, and opposite stars on circular labels.
pub fn count_nc2_constrained(sig: &WordSignature) -> Result<u64> {
    let m = sig.len();
    if m % 2 == 1 {
        return Ok(0);
    }
    let mut count = 0u64;
    for_each_pairing(m, |p| {
        if p.is_noncrossing() && (0..m).all(|k| sig.block_allowed(k, p.mate(k))) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// The predicted limit of `E∘tr` for the word: the count of compatible
/// non-crossing pairings. Exposed under its own name because it is the
/// headline free-probability prediction.
pub fn free_limit_prediction(sig: &WordSignature) -> Result<u64> {
    count_nc2_constrained(sig)
}
