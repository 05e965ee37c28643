//! Entry permutations acting on Gaussian random matrices.
//!
//! An *entry permutation* is a bijection `σ` of the index set `[N]×[N]`; it
//! acts on an `N×N` matrix `A` by relabelling entries, `[A^σ]_{ij} = A_{σ(i,j)}`.
//! The matrix transpose is the special case `σ(i,j) = (j,i)`; the partial
//! transpose and the mixing map of quantum information theory are further
//! examples at perfect-square sizes.
//!
//! This crate provides:
//!
//! * [`perm`] — explicit entry permutations and the named families
//!   (transpose, partial transpose, mixing map, tensor products, …),
//! * [`conditions`] — the counting statistics that certify whether a family
//!   of permutation schemes makes `{G^σ}` asymptotically free, with growth
//!   exponents fitted over a size grid,
//! * [`pairings`] — pair partitions, crossings, and constrained non-crossing
//!   counts that predict the limiting moments,
//! * [`wick`] — the exact finite-`N` mixed moments `E∘tr(G^{σ1}⋯G^{σm})`
//!   summed over pairings in exact rational arithmetic,
//! * [`gaussian`] — seeded Monte Carlo estimation of the same moments (plus
//!   words with constant matrices interleaved), for cross-validation.
//!
//! Sample generation, pairing sums and grid evaluations run on rayon when the
//! default `parallel` feature is enabled; disabling it yields a sequential
//! build with bitwise-identical results.

pub mod conditions;
mod error;
pub mod gaussian;
pub mod matrix;
mod par;
pub mod pairings;
pub mod perm;
pub mod schemes;
pub mod wick;
pub mod word;

pub use error::{Error, Result};
pub use matrix::CMat;
pub use par::set_max_threads;
pub use pairings::PairPartition;
pub use perm::{EntryPermutation, LinePerm};
pub use schemes::{PermutationScheme, SchemeRegistry};
