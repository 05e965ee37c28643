//! Words of matrix factors whose normalized trace-moment is studied.
//!
//! Each factor is either a permuted copy of the one shared Gaussian matrix
//! (a scheme label plus an optional star for the adjoint) or a named
//! constant matrix. All factors are instantiated at a common side.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pairings::WordSignature;
use crate::perm::EntryPermutation;
use crate::schemes::{SchemeKind, SchemeRegistry};

/// Reserved constant-matrix names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstName {
    /// Identity.
    I,
    /// Upper block-triangular `[[I, 2I], [0, I]]` (even sides).
    Z,
    /// Traceless `[[I, -I], [2I, -I]]` (even sides).
    T,
}

impl ConstName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstName::I => "I",
            ConstName::Z => "Z",
            ConstName::T => "T",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// `G^σ` for the scheme labelled `label`, conjugate-transposed if `star`.
    Gaussian { label: String, star: bool },
    Constant(ConstName),
}

/// An ordered, non-empty word of factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentWord {
    factors: Vec<Factor>,
}

impl MomentWord {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(MomentWord { factors })
    }

    /// Word of unstarred Gaussian factors from scheme labels.
    pub fn gaussians(labels: &[&str]) -> Result<Self> {
        MomentWord::new(
            labels
                .iter()
                .map(|l| Factor::Gaussian {
                    label: l.to_string(),
                    star: false,
                })
                .collect(),
        )
    }

    /// Word of Gaussian factors with star flags.
    pub fn starred(labels: &[(&str, bool)]) -> Result<Self> {
        MomentWord::new(
            labels
                .iter()
                .map(|(l, s)| Factor::Gaussian {
                    label: l.to_string(),
                    star: *s,
                })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_constant_free(&self) -> bool {
        self.factors
            .iter()
            .all(|f| matches!(f, Factor::Gaussian { .. }))
    }

    /// Display labels, stars rendered as a trailing `*`.
    pub fn labels(&self) -> Vec<String> {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Gaussian { label, star: false } => label.clone(),
                Factor::Gaussian { label, star: true } => format!("{label}*"),
                Factor::Constant(c) => c.as_str().to_string(),
            })
            .collect()
    }

    /// Substitutes every factor by its entry permutation at side `n`:
    /// starred factors become `t∘σ∘t`. Constant factors are rejected — the
    /// exact evaluator covers pure Gaussian words only.
    pub fn to_perms(&self, registry: &SchemeRegistry, n: usize) -> Result<Vec<EntryPermutation>> {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Gaussian { label, star } => {
                    let perm = registry.get(label)?.build(n)?;
                    Ok(if *star { perm.conjugate_by_t() } else { perm })
                }
                Factor::Constant(c) => Err(Error::ConstantInExactWord {
                    name: c.as_str().to_string(),
                }),
            })
            .collect()
    }

    /// The word's signature for the limit predictor, given a kind per
    /// scheme label. Falls back to the built-in default kinds for labels
    /// missing from the map; errors when neither is available or the word
    /// contains constants.
    pub fn signature(&self, kinds: &BTreeMap<String, SchemeKind>) -> Result<WordSignature> {
        let letters = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Gaussian { label, star } => {
                    let kind = kinds
                        .get(label)
                        .copied()
                        .or_else(|| SchemeRegistry::default_kind(label))
                        .ok_or_else(|| Error::MissingKind {
                            label: label.clone(),
                        })?;
                    Ok((label.clone(), *star, kind.into()))
                }
                Factor::Constant(c) => Err(Error::MissingKind {
                    label: c.as_str().to_string(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        WordSignature::new(&letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeRegistry;

    #[test]
    fn starred_factor_becomes_conjugated_perm() {
        let reg = SchemeRegistry::with_builtins();
        let word = MomentWord::starred(&[("mix", false), ("mix", true)]).unwrap();
        let perms = word.to_perms(&reg, 4).unwrap();
        let mix = reg.get("mix").unwrap().build(4).unwrap();
        assert_eq!(perms[0], mix);
        assert_eq!(perms[1], mix.conjugate_by_t());
    }

    #[test]
    fn plain_word_resolves_labels() {
        let reg = SchemeRegistry::with_builtins();
        let word = MomentWord::gaussians(&["id", "t"]).unwrap();
        let perms = word.to_perms(&reg, 3).unwrap();
        assert_eq!(perms[0], EntryPermutation::identity(3));
        assert_eq!(perms[1], EntryPermutation::transpose(3));
    }

    #[test]
    fn constants_rejected_by_exact_path() {
        let reg = SchemeRegistry::with_builtins();
        let word = MomentWord::new(vec![
            Factor::Gaussian {
                label: "id".into(),
                star: false,
            },
            Factor::Constant(ConstName::Z),
        ])
        .unwrap();
        assert!(matches!(
            word.to_perms(&reg, 4),
            Err(Error::ConstantInExactWord { .. })
        ));
    }

    #[test]
    fn empty_word_rejected() {
        assert!(matches!(MomentWord::new(vec![]), Err(Error::EmptyWord)));
    }
}
