//! Named families of entry permutations, one permutation per admissible side.
//!
//! A [`PermutationScheme`] is a rule `N ↦ EntryPermutation` of side `N`
//! together with an admissibility predicate: the partial transpose and the
//! mixing map exist only at perfect-square sides, the quadrant-shift pair
//! only from side 2 up, while the identity, transpose, shear and tensor
//! families exist everywhere. Requesting an inadmissible side is an error,
//! never a silent rounding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{fold_index, tensor_perm, EntryPermutation, LinePerm};

type AdmissibleFn = dyn Fn(usize) -> bool + Send + Sync;
type BuildFn = dyn Fn(usize) -> Result<EntryPermutation> + Send + Sync;

/// A labelled rule producing one entry permutation per admissible side.
pub struct PermutationScheme {
    label: String,
    admissible: Box<AdmissibleFn>,
    requirement: &'static str,
    build: Box<BuildFn>,
}

impl fmt::Debug for PermutationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationScheme")
            .field("label", &self.label)
            .field("requirement", &self.requirement)
            .finish()
    }
}

impl PermutationScheme {
    pub fn new<A, B>(label: impl Into<String>, requirement: &'static str, admissible: A, build: B) -> Self
    where
        A: Fn(usize) -> bool + Send + Sync + 'static,
        B: Fn(usize) -> Result<EntryPermutation> + Send + Sync + 'static,
    {
        PermutationScheme {
            label: label.into(),
            admissible: Box::new(admissible),
            requirement,
            build: Box::new(build),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn admissible(&self, side: usize) -> bool {
        side >= 1 && (self.admissible)(side)
    }

    /// Builds the permutation of the given side, or errors when the side is
    /// not admissible.
    pub fn build(&self, side: usize) -> Result<EntryPermutation> {
        if !self.admissible(side) {
            return Err(Error::InadmissibleSide {
                label: self.label.clone(),
                side,
                requirement: self.requirement,
            });
        }
        let perm = (self.build)(side)?;
        debug_assert_eq!(perm.n(), side);
        Ok(perm)
    }
}

/// `N ↦ identity`.
pub fn identity_scheme() -> PermutationScheme {
    PermutationScheme::new("id", "any side", |_| true, |n| {
        Ok(EntryPermutation::identity(n))
    })
}

/// `N ↦ t`, the transpose `t(i,j) = (j,i)`.
pub fn transpose_scheme() -> PermutationScheme {
    PermutationScheme::new("t", "any side", |_| true, |n| {
        Ok(EntryPermutation::transpose(n))
    })
}

/// The transpose at a fixed side.
pub fn transpose_perm(n: usize) -> EntryPermutation {
    EntryPermutation::transpose(n)
}

fn is_perfect_square(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Decodes a 1-based index of `[b²]` into (block, position), both in `[b]`.
#[inline]
fn split_block(x: usize, b: usize) -> (usize, usize) {
    ((x - 1) / b + 1, (x - 1) % b + 1)
}

/// Encodes (block, position) back into `[b²]`.
#[inline]
fn join_block(hi: usize, lo: usize, b: usize) -> usize {
    (hi - 1) * b + lo
}

/// The partial transpose `Γ`: at side `b²`, views the matrix as a `b×b` grid
/// of `b×b` blocks and transposes each block in place. A symmetric
/// involution.
pub fn partial_transpose_scheme() -> PermutationScheme {
    PermutationScheme::new(
        "gamma",
        "side must be a perfect square",
        |n| is_perfect_square(n).is_some(),
        |n| {
            let b = is_perfect_square(n).unwrap();
            EntryPermutation::from_fn(n, |i, j| {
                let (a, bb) = split_block(i, b);
                let (c, d) = split_block(j, b);
                // (a,b,c,d) -> (a,d,c,b)
                (join_block(a, d, b), join_block(c, bb, b))
            })
        },
    )
}

/// The mixing map `M`: at side `b²`, swaps the two middle tensor indices,
/// `(a,b,c,d) ↦ (a,c,b,d)`. An involution, not symmetric for `b ≥ 2`.
pub fn mixing_map_scheme() -> PermutationScheme {
    PermutationScheme::new(
        "mix",
        "side must be a perfect square",
        |n| is_perfect_square(n).is_some(),
        |n| {
            let b = is_perfect_square(n).unwrap();
            EntryPermutation::from_fn(n, |i, j| {
                let (a, bb) = split_block(i, b);
                let (c, d) = split_block(j, b);
                (join_block(a, c, b), join_block(bb, d, b))
            })
        },
    )
}

/// Tensor-product family `N ↦ φ_N ⊗ ψ_N` from two line-permutation rules.
pub fn tensor_scheme<F, G>(label: impl Into<String>, phi: F, psi: G) -> PermutationScheme
where
    F: Fn(usize) -> LinePerm + Send + Sync + 'static,
    G: Fn(usize) -> LinePerm + Send + Sync + 'static,
{
    PermutationScheme::new(label, "any side", |_| true, move |n| {
        tensor_perm(&phi(n), &psi(n))
    })
}

/// `fold_index` without the `[2n]` domain guard; the shift rule needs
/// `j + 2` which leaves `[2n]` when `n = 1`.
fn mod1(n: usize, k: usize) -> usize {
    (k - 1) % n + 1
}

fn quadrant_shift_even(half: usize, i: usize, j: usize) -> (usize, usize) {
    if i <= half && j <= half {
        // Double cyclic shift confined to the top-left quadrant.
        (mod1(half, i + 1), mod1(half, j + 2))
    } else {
        (i, j)
    }
}

fn position_swap_even(half: usize, i: usize, j: usize) -> (usize, usize) {
    let fi = mod1(half, i);
    let fj = mod1(half, j);
    (i - fi + fj, j - fj + fi)
}

fn quadrant_pair_build(side: usize, second: bool) -> Result<EntryPermutation> {
    // Even side 2h is the native case; odd side 2h+1 reuses the even rule on
    // the leading 2h indices and fixes every pair touching the last one.
    let (even, half) = if side % 2 == 0 {
        (side, side / 2)
    } else {
        (side - 1, (side - 1) / 2)
    };
    EntryPermutation::from_fn(side, |i, j| {
        if i > even || j > even {
            return (i, j);
        }
        let (p, q) = quadrant_shift_even(half, i, j);
        if second {
            position_swap_even(half, p, q)
        } else {
            (p, q)
        }
    })
}

/// A pair of block-structured families at side `2h` (odd sides are completed
/// by fixed points): `mu1` applies a double cyclic shift inside the top-left
/// `h×h` quadrant and fixes everything else; `mu2` composes `mu1` with the
/// position swap `(i,j) ↦ (i−φ(i)+φ(j), j−φ(j)+φ(i))`, which transposes each
/// `h×h` block in the 2×2 block picture.
///
/// Both satisfy the pairwise collision condition but neither the symmetry
/// nor the self-collision smallness condition, so `G^{mu1}`, `G^{mu2}` need
/// not be asymptotically free.
pub fn quadrant_shift_schemes() -> (PermutationScheme, PermutationScheme) {
    let mu1 = PermutationScheme::new(
        "mu1",
        "side must be at least 2",
        |n| n >= 2,
        |n| quadrant_pair_build(n, false),
    );
    let mu2 = PermutationScheme::new(
        "mu2",
        "side must be at least 2",
        |n| n >= 2,
        |n| quadrant_pair_build(n, true),
    );
    (mu1, mu2)
}

/// The column shear `τ(i,j) = (i+j mod N, j)`: each column is cyclically
/// shifted by its own index. Satisfies the per-scheme smallness condition but
/// not the pairwise one against the identity — yet `G` and `G^τ` are still
/// asymptotically free, exhibiting that the certified conditions are
/// sufficient, not necessary.
pub fn shear_scheme() -> PermutationScheme {
    PermutationScheme::new("tau", "any side", |_| true, |n| {
        EntryPermutation::from_fn(n, |i, j| (fold_index(n, i + j).unwrap(), j))
    })
}

/// Wraps explicit per-side tables; admissible exactly at the table sides.
pub fn custom_scheme(
    label: impl Into<String>,
    tables: BTreeMap<usize, EntryPermutation>,
) -> PermutationScheme {
    let tables = Arc::new(tables);
    let sides = Arc::clone(&tables);
    PermutationScheme::new(
        label,
        "side must be one of the supplied tables",
        move |n| sides.contains_key(&n),
        move |n| Ok(tables[&n].clone()),
    )
}

/// `label ↦ a∘b` built sidewise; admissible where both are.
pub fn composed_scheme(
    label: impl Into<String>,
    a: Arc<PermutationScheme>,
    b: Arc<PermutationScheme>,
) -> PermutationScheme {
    let (a2, b2) = (Arc::clone(&a), Arc::clone(&b));
    PermutationScheme::new(
        label,
        "side must be admissible for both factors",
        move |n| a2.admissible(n) && b2.admissible(n),
        move |n| a.build(n)?.compose(&b.build(n)?),
    )
}

/// Parses the plain-text table format:
///
/// ```text
/// N 2
/// 1 1 -> 1 2
/// 1 2 -> 1 1
/// 2 1 -> 2 1
/// 2 2 -> 2 2
/// ```
///
/// Exactly `n²` data lines `i j -> p q` (1-based); duplicate or missing
/// pairs are load errors.
pub fn parse_table(text: &str) -> Result<EntryPermutation> {
    let mut lines = text.lines().enumerate();
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| Error::TableParse {
            line: 1,
            message: "empty file".into(),
        })?;
    let mut head = first.split_whitespace();
    let n: usize = match (head.next(), head.next(), head.next()) {
        (Some("N"), Some(v), None) => v.parse().map_err(|_| Error::TableParse {
            line: first_no + 1,
            message: format!("bad side `{v}`"),
        })?,
        _ => {
            return Err(Error::TableParse {
                line: first_no + 1,
                message: "expected header `N <side>`".into(),
            })
        }
    };
    if n == 0 {
        return Err(Error::TableParse {
            line: first_no + 1,
            message: "side must be positive".into(),
        });
    }
    let mut pairs = Vec::with_capacity(n * n);
    let mut seen_source = vec![false; n * n];
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::TableParse {
            line: no + 1,
            message,
        };
        let mut toks = line.split_whitespace();
        let nums: Vec<&str> = toks.by_ref().take(5).collect();
        if nums.len() != 5 || nums[2] != "->" || toks.next().is_some() {
            return Err(parse_err(format!("expected `i j -> p q`, got `{line}`")));
        }
        let mut vals = [0usize; 4];
        for (slot, tok) in vals.iter_mut().zip([nums[0], nums[1], nums[3], nums[4]]) {
            *slot = tok
                .parse()
                .map_err(|_| parse_err(format!("bad index `{tok}`")))?;
            if *slot < 1 || *slot > n {
                return Err(parse_err(format!("index `{tok}` out of range 1..={n}")));
            }
        }
        let [i, j, p, q] = vals;
        let src = (i - 1) * n + (j - 1);
        if seen_source[src] {
            return Err(parse_err(format!("pair ({i},{j}) listed twice")));
        }
        seen_source[src] = true;
        pairs.push(((i, j), (p, q)));
    }
    EntryPermutation::from_pairs(n, &pairs)
}

/// Loads a single-table file as a custom scheme labelled by the file stem.
pub fn load_table_file(path: &std::path::Path) -> Result<PermutationScheme> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::TableParse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    let perm = parse_table(&text)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into());
    let mut tables = BTreeMap::new();
    tables.insert(perm.n(), perm);
    Ok(custom_scheme(label, tables))
}

/// Limit kind of a single permuted copy `G^σ`: symmetric schemes converge to
/// semicircular variables, collision-small ones to circular variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Symmetric,
    JSmall,
}

/// The built-in scheme names understood across the crate and the CLI.
pub struct SchemeRegistry {
    schemes: BTreeMap<String, Arc<PermutationScheme>>,
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        SchemeRegistry {
            schemes: BTreeMap::new(),
        }
    }

    /// Registry with the named families: `id`, `t`, `gamma`, `mix`, `mu1`,
    /// `mu2`, `tau`.
    pub fn with_builtins() -> Self {
        let mut reg = SchemeRegistry::empty();
        reg.insert(identity_scheme());
        reg.insert(transpose_scheme());
        reg.insert(partial_transpose_scheme());
        reg.insert(mixing_map_scheme());
        let (mu1, mu2) = quadrant_shift_schemes();
        reg.insert(mu1);
        reg.insert(mu2);
        reg.insert(shear_scheme());
        reg
    }

    pub fn insert(&mut self, scheme: PermutationScheme) -> Arc<PermutationScheme> {
        let arc = Arc::new(scheme);
        self.schemes.insert(arc.label().to_string(), Arc::clone(&arc));
        arc
    }

    /// Looks a scheme up by label, accepting the historical aliases
    /// `r41a`/`r41b`/`r42` for `mu1`/`mu2`/`tau`.
    pub fn get(&self, label: &str) -> Result<Arc<PermutationScheme>> {
        let canonical = match label {
            "r41a" => "mu1",
            "r41b" => "mu2",
            "r42" => "tau",
            other => other,
        };
        self.schemes
            .get(canonical)
            .cloned()
            .ok_or_else(|| Error::UnknownScheme {
                label: label.to_string(),
            })
    }

    /// Default limit kind for the built-in families, where one is canonical.
    pub fn default_kind(label: &str) -> Option<SchemeKind> {
        match label {
            "id" | "t" | "gamma" => Some(SchemeKind::Symmetric),
            "mix" | "tau" => Some(SchemeKind::JSmall),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_transpose_small_cases() {
        let gamma = partial_transpose_scheme();
        assert_eq!(gamma.build(1).unwrap(), EntryPermutation::identity(1));
        let g2 = gamma.build(4).unwrap();
        assert_eq!(g2.apply(1, 2), (2, 1));
        assert!(g2.is_symmetric());
        assert_eq!(g2.compose(&g2).unwrap(), EntryPermutation::identity(4));
        assert!(matches!(
            gamma.build(8),
            Err(Error::InadmissibleSide { side: 8, .. })
        ));
    }

    #[test]
    fn mixing_map_small_cases() {
        let mix = mixing_map_scheme();
        assert_eq!(mix.build(1).unwrap(), EntryPermutation::identity(1));
        let m2 = mix.build(4).unwrap();
        assert_eq!(m2.apply(1, 2), (1, 2));
        assert!(!m2.is_symmetric());
        assert_eq!(m2.compose(&m2).unwrap(), EntryPermutation::identity(4));
    }

    #[test]
    fn quadrant_shift_values_at_side_four() {
        let (mu1, mu2) = quadrant_shift_schemes();
        let p1 = mu1.build(4).unwrap();
        // Top-left quadrant: (1,1) -> (fold(2), fold(3)) = (2,1).
        assert_eq!(p1.apply(1, 1), (2, 1));
        // Outside the quadrant everything is fixed.
        assert_eq!(p1.apply(1, 3), (1, 3));
        assert_eq!(p1.apply(4, 2), (4, 2));

        let p2 = mu2.build(4).unwrap();
        // Position swap fixes (1,3): both fold to position 1 in their blocks.
        let swap_only = p2.compose(&p1.inverse()).unwrap();
        assert_eq!(swap_only.apply(1, 3), (1, 3));
    }

    #[test]
    fn quadrant_shift_odd_side_extension() {
        let (mu1, mu2) = quadrant_shift_schemes();
        for scheme in [&mu1, &mu2] {
            let p = scheme.build(5).unwrap();
            for k in 1..=5 {
                assert_eq!(p.apply(k, 5), (k, 5));
                assert_eq!(p.apply(5, k), (5, k));
            }
        }
        assert!(mu1.build(1).is_err());
    }

    #[test]
    fn shear_cycles_columns() {
        let tau = shear_scheme().build(3).unwrap();
        assert_eq!(tau.apply(1, 1), (2, 1));
        assert_eq!(tau.apply(2, 1), (3, 1));
        assert_eq!(tau.apply(3, 1), (1, 1));
    }

    #[test]
    fn builders_are_bijections_on_small_grid() {
        let reg = SchemeRegistry::with_builtins();
        for label in ["id", "t", "gamma", "mix", "mu1", "mu2", "tau"] {
            let scheme = reg.get(label).unwrap();
            for side in 1..=16 {
                if scheme.admissible(side) {
                    // from_fn validates bijectivity internally.
                    let p = scheme.build(side).unwrap();
                    assert_eq!(p.n(), side);
                }
            }
        }
    }

    #[test]
    fn registry_aliases_resolve() {
        let reg = SchemeRegistry::with_builtins();
        assert_eq!(reg.get("r41a").unwrap().label(), "mu1");
        assert_eq!(reg.get("r42").unwrap().label(), "tau");
        assert!(reg.get("nope").is_err());
    }

    #[test]
    fn table_parsing_roundtrip_and_errors() {
        let good = "N 2\n1 1 -> 1 2\n1 2 -> 1 1\n2 1 -> 2 1\n2 2 -> 2 2\n";
        let p = parse_table(good).unwrap();
        assert_eq!(p.apply(1, 1), (1, 2));

        let missing = "N 2\n1 1 -> 1 1\n1 2 -> 1 2\n2 1 -> 2 1\n";
        assert!(matches!(
            parse_table(missing),
            Err(Error::MissingSource { i: 2, j: 2 })
        ));

        let dup = "N 2\n1 1 -> 1 1\n1 2 -> 1 1\n2 1 -> 2 1\n2 2 -> 2 2\n";
        match parse_table(dup) {
            Err(Error::DuplicateTarget { p, q, .. }) => assert_eq!((p, q), (1, 1)),
            other => panic!("expected duplicate error, got {other:?}"),
        }

        let bad_header = "M 2\n";
        assert!(matches!(parse_table(bad_header), Err(Error::TableParse { line: 1, .. })));
    }

    #[test]
    fn identity_scheme_example() {
        let id = identity_scheme();
        assert_eq!(id.build(3).unwrap().apply(2, 3), (2, 3));
        assert_eq!(id.build(1).unwrap().apply(1, 1), (1, 1));
    }
}
