//! Exact finite-`N` mixed moments of permuted Gaussian matrices.
//!
//! For a word `G^{σ1}·…·G^{σm}`, expanding the trace by Wick's formula gives
//!
//! ```text
//! E∘tr(G^{σ1}⋯G^{σm}) = Σ_{π ∈ P₂(m)} V(π, σ⃗),
//! V(π, σ⃗) = N^{−m/2−1} · #{ i⃗ ∈ [N]^m : σ_k(i_k, i_{k+1}) = t(σ_l(i_l, i_{l+1})) ∀ (k,l) ∈ π }
//! ```
//!
//! with indices cyclic (`i_{m+1} = i_1`). Tuple counts are exact integers
//! and every `V` an exact rational, so the sums carry no floating error.
//!
//! Counting runs a depth-first search over `i_1, …, i_m` with constraint
//! propagation: once one side of a block has both its indices assigned, the
//! block equation determines the other side through a permutation inverse,
//! either fixing two more indices or pruning the branch. Work is metered in
//! elementary constraint checks against a configurable budget.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::pairings::{enumerate_pairings, free_limit_prediction, PairPartition};
use crate::par;
use crate::perm::EntryPermutation;
use crate::schemes::{SchemeKind, SchemeRegistry};
use crate::word::MomentWord;

/// Default work budget: 10⁸ elementary constraint checks per call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

struct SharedBudget {
    used: AtomicU64,
    limit: u64,
}

impl SharedBudget {
    fn new(limit: u64) -> Self {
        SharedBudget {
            used: AtomicU64::new(0),
            limit,
        }
    }

    fn try_spend(&self, amount: u64) -> bool {
        self.used.fetch_add(amount, Ordering::Relaxed) + amount <= self.limit
    }
}

const FLUSH_EVERY: u64 = 1024;

struct Solver<'a> {
    n: usize,
    m: usize,
    perms: &'a [&'a EntryPermutation],
    inverses: Vec<EntryPermutation>,
    /// blocks[b] = (k, l) with k < l, 0-based positions.
    blocks: Vec<(usize, usize)>,
    /// blocks touching each variable (as k, k+1, l or l+1).
    adjacent: Vec<Vec<usize>>,
    assign: Vec<i32>,
    resolved: Vec<bool>,
    budget: &'a SharedBudget,
    local_checks: u64,
    exhausted: bool,
}

enum Step {
    Ok { assigned: Vec<usize>, resolved: Vec<usize> },
    Conflict { assigned: Vec<usize>, resolved: Vec<usize> },
}

impl<'a> Solver<'a> {
    fn new(
        pairing: &PairPartition,
        perms: &'a [&'a EntryPermutation],
        budget: &'a SharedBudget,
    ) -> Self {
        let m = pairing.len();
        let n = perms[0].n();
        let blocks: Vec<(usize, usize)> = (0..m)
            .filter(|&k| k < pairing.mate(k))
            .map(|k| (k, pairing.mate(k)))
            .collect();
        let mut adjacent = vec![Vec::new(); m];
        for (b, &(k, l)) in blocks.iter().enumerate() {
            for v in [k, (k + 1) % m, l, (l + 1) % m] {
                if !adjacent[v].contains(&b) {
                    adjacent[v].push(b);
                }
            }
        }
        Solver {
            n,
            m,
            perms,
            inverses: perms.iter().map(|p| p.inverse()).collect(),
            blocks,
            adjacent,
            assign: vec![-1; m],
            resolved: vec![false; m / 2],
            budget,
            local_checks: 0,
            exhausted: false,
        }
    }

    fn spend_check(&mut self) -> bool {
        self.local_checks += 1;
        if self.local_checks >= FLUSH_EVERY {
            self.local_checks = 0;
            if !self.budget.try_spend(FLUSH_EVERY) {
                self.exhausted = true;
                return false;
            }
        }
        true
    }

    /// Applies the block equation once both indices of one side are known.
    /// Returns the required values for the other side's two positions.
    fn required_side(&mut self, block: usize, from_first_side: bool) -> Option<(usize, usize, usize, usize)> {
        if !self.spend_check() {
            return None;
        }
        let (k, l) = self.blocks[block];
        let m = self.m;
        let (src, dst) = if from_first_side { (k, l) } else { (l, k) };
        let (s1, s2) = (src, (src + 1) % m);
        let (d1, d2) = (dst, (dst + 1) % m);
        let a = self.assign[s1] as usize + 1;
        let b = self.assign[s2] as usize + 1;
        // σ_src(a, b) = t(σ_dst(x, y))  ⟺  (x, y) = σ_dst⁻¹(t(σ_src(a, b)))
        // (the constraint is symmetric in the two sides).
        let (p, q) = self.perms[src].apply(a, b);
        let (x, y) = self.inverses[dst].apply(q, p);
        Some((d1, d2, x - 1, y - 1))
    }

    /// Assigns `var = value` and propagates to a fixpoint. All assignments
    /// and block resolutions are recorded for undoing.
    fn assign_and_propagate(&mut self, var: usize, value: usize) -> Step {
        let mut assigned = vec![var];
        let mut resolved = Vec::new();
        self.assign[var] = value as i32;
        let mut queue = vec![var];
        while let Some(v) = queue.pop() {
            for bi in 0..self.adjacent[v].len() {
                let block = self.adjacent[v][bi];
                if self.resolved[block] {
                    continue;
                }
                let (k, l) = self.blocks[block];
                let m = self.m;
                let first_full =
                    self.assign[k] >= 0 && self.assign[(k + 1) % m] >= 0;
                let second_full =
                    self.assign[l] >= 0 && self.assign[(l + 1) % m] >= 0;
                let from_first = if first_full {
                    true
                } else if second_full {
                    false
                } else {
                    continue;
                };
                match self.required_side(block, from_first) {
                    None => return Step::Conflict { assigned, resolved },
                    Some((d1, d2, x, y)) => {
                        let mut conflict = false;
                        for (pos, want) in [(d1, x), (d2, y)] {
                            let current = self.assign[pos];
                            if current < 0 {
                                self.assign[pos] = want as i32;
                                assigned.push(pos);
                                queue.push(pos);
                            } else if current as usize != want {
                                conflict = true;
                                break;
                            }
                        }
                        if conflict {
                            return Step::Conflict { assigned, resolved };
                        }
                        self.resolved[block] = true;
                        resolved.push(block);
                    }
                }
            }
        }
        Step::Ok { assigned, resolved }
    }

    fn undo(&mut self, assigned: &[usize], resolved: &[usize]) {
        for &v in assigned {
            self.assign[v] = -1;
        }
        for &b in resolved {
            self.resolved[b] = false;
        }
    }

    fn count(&mut self) -> Result<u64> {
        let count = self.dfs();
        if self.exhausted {
            return Err(Error::BudgetExceeded {
                budget: self.budget.limit,
                pairings_done: 0,
                pairings_total: 1,
                suggested: self.budget.limit.saturating_mul(2),
            });
        }
        Ok(count)
    }

    fn dfs(&mut self) -> u64 {
        let var = match self.assign.iter().position(|&a| a < 0) {
            Some(v) => v,
            // Full assignment: every block adjacent to the last assigned
            // variable has been checked, so this is one solution.
            None => return 1,
        };
        let mut total = 0u64;
        for value in 0..self.n {
            match self.assign_and_propagate(var, value) {
                Step::Ok { assigned, resolved } => {
                    total += self.dfs();
                    self.undo(&assigned, &resolved);
                }
                Step::Conflict { assigned, resolved } => {
                    self.undo(&assigned, &resolved);
                }
            }
            if self.exhausted {
                break;
            }
        }
        total
    }
}

fn check_word_perms(perms: &[&EntryPermutation]) -> Result<usize> {
    let n = perms
        .first()
        .map(|p| p.n())
        .ok_or(Error::EmptyWord)?;
    for p in perms {
        if p.n() != n {
            return Err(Error::SizeMismatch {
                left: n,
                right: p.n(),
            });
        }
    }
    Ok(n)
}

/// The number of index tuples `(i_1,…,i_m) ∈ [N]^m` satisfying every block
/// equation of the pairing, counted exactly.
pub fn tuple_count(
    pairing: &PairPartition,
    perms: &[&EntryPermutation],
    budget: u64,
) -> Result<u64> {
    let _ = check_word_perms(perms)?;
    if perms.len() != pairing.len() {
        return Err(Error::SizeMismatch {
            left: perms.len(),
            right: pairing.len(),
        });
    }
    let shared = SharedBudget::new(budget);
    Solver::new(pairing, perms, &shared).count()
}

/// `V(π, σ⃗) = tuple_count · N^{−m/2−1}` as an exact rational.
pub fn v_exact(
    pairing: &PairPartition,
    perms: &[&EntryPermutation],
    budget: u64,
) -> Result<BigRational> {
    let n = check_word_perms(perms)?;
    let count = tuple_count(pairing, perms, budget)?;
    Ok(v_from_count(count, n, pairing.len()))
}

fn v_from_count(count: u64, n: usize, m: usize) -> BigRational {
    let denom = BigInt::from(n).pow((m / 2 + 1) as u32);
    BigRational::new(BigInt::from(count), denom)
}

/// One pairing's contribution to the Wick sum.
#[derive(Debug, Clone)]
pub struct PairingTerm {
    pub pairing: PairPartition,
    pub count: u64,
    pub v: BigRational,
}

/// The full Wick expansion of `E∘tr(G^{σ1}⋯G^{σm})` at one side.
#[derive(Debug, Clone)]
pub struct ExactMoment {
    pub n: usize,
    pub m: usize,
    /// Σ of the per-pairing contributions; exactly 0 for odd `m`.
    pub value: BigRational,
    pub per_pairing: Vec<PairingTerm>,
}

impl ExactMoment {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `{N, m, word, value: "p/q", per_pairing: [{blocks, count, V}]}`.
    pub fn to_json(&self, word: &[String]) -> serde_json::Value {
        json!({
            "N": self.n,
            "m": self.m,
            "word": word,
            "value": self.value.to_string(),
            "per_pairing": self.per_pairing.iter().map(|t| {
                json!({
                    "blocks": t.pairing,
                    "count": t.count,
                    "V": t.v.to_string(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates the Wick sum for a word of entry permutations. Odd-length
/// words return exactly zero with an empty pairing list; even-length words
/// enumerate all `(m−1)!!` pairings, evaluated independently (in parallel
/// when enabled) and summed in canonical pairing order.
pub fn exact_moment(perms: &[EntryPermutation], budget: u64) -> Result<ExactMoment> {
    let refs: Vec<&EntryPermutation> = perms.iter().collect();
    let n = check_word_perms(&refs)?;
    let m = refs.len();
    if m % 2 == 1 {
        return Ok(ExactMoment {
            n,
            m,
            value: BigRational::zero(),
            per_pairing: Vec::new(),
        });
    }
    let pairings = enumerate_pairings(m)?;
    let shared = SharedBudget::new(budget);
    let counts = par::map_indexed(pairings.len(), |idx| {
        Solver::new(&pairings[idx], &refs, &shared).count()
    });

    let mut per_pairing = Vec::with_capacity(pairings.len());
    let mut value = BigRational::zero();
    let total = pairings.len();
    for (done, (pairing, count)) in pairings.iter().zip(counts).enumerate() {
        let count = count.map_err(|e| match e {
            Error::BudgetExceeded { budget, .. } => Error::BudgetExceeded {
                budget,
                pairings_done: done,
                pairings_total: total,
                suggested: budget
                    .saturating_mul(total as u64)
                    .checked_div(done.max(1) as u64)
                    .unwrap_or(u64::MAX)
                    .saturating_mul(2),
            },
            other => other,
        })?;
        let v = v_from_count(count, n, m);
        value += &v;
        per_pairing.push(PairingTerm {
            pairing: *pairing,
            count,
            v,
        });
    }
    Ok(ExactMoment {
        n,
        m,
        value,
        per_pairing,
    })
}

/// Exact values over a side grid next to the predicted limit.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub prediction: u64,
    pub rows: Vec<AsymptoticRow>,
}

#[derive(Debug, Clone)]
pub struct AsymptoticRow {
    pub side: usize,
    pub value: BigRational,
    /// `|value − prediction|`, as a float for reporting.
    pub gap: f64,
}

/// Evaluates a scheme word exactly on every grid side and reports the gap to
/// the free-probability prediction.
pub fn asymptotic_check(
    word: &MomentWord,
    registry: &SchemeRegistry,
    kinds: &std::collections::BTreeMap<String, SchemeKind>,
    grid: &[usize],
    budget: u64,
) -> Result<AsymptoticReport> {
    let prediction = free_limit_prediction(&word.signature(kinds)?)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &side in grid {
        let perms = word.to_perms(registry, side)?;
        let moment = exact_moment(&perms, budget)?;
        let gap = (&moment.value - BigRational::from(BigInt::from(prediction)))
            .abs()
            .to_f64()
            .unwrap_or(f64::NAN);
        rows.push(AsymptoticRow {
            side,
            value: moment.value,
            gap,
        });
    }
    Ok(AsymptoticReport { prediction, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairings::for_each_pairing;
    use crate::perm::tests_support::random_entry_perm;
    use crate::perm::EntryPermutation;
    use crate::schemes::partial_transpose_scheme;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big_ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// Naive N^m scan straight off the definition.
    fn tuple_count_naive(pairing: &PairPartition, perms: &[&EntryPermutation]) -> u64 {
        let m = pairing.len();
        let n = perms[0].n();
        let mut idx = vec![1usize; m];
        let mut count = 0u64;
        loop {
            let ok = (0..m).all(|k| {
                let l = pairing.mate(k);
                if k > l {
                    return true;
                }
                let a = perms[k].apply(idx[k], idx[(k + 1) % m]);
                let b = perms[l].apply(idx[l], idx[(l + 1) % m]);
                a == (b.1, b.0)
            });
            if ok {
                count += 1;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == m {
                    return count;
                }
                idx[pos] += 1;
                if idx[pos] <= n {
                    break;
                }
                idx[pos] = 1;
                pos += 1;
            }
        }
    }

    #[test]
    fn tuple_count_identity_pair() {
        let p = PairPartition::from_blocks(2, &[(1, 2)]).unwrap();
        let id = EntryPermutation::identity(3);
        assert_eq!(tuple_count(&p, &[&id, &id], DEFAULT_BUDGET).unwrap(), 9);
    }

    #[test]
    fn tuple_count_crossing_identity_word() {
        let p = PairPartition::from_blocks(4, &[(1, 3), (2, 4)]).unwrap();
        let id = EntryPermutation::identity(4);
        let perms = [&id, &id, &id, &id];
        assert_eq!(tuple_count(&p, &perms, DEFAULT_BUDGET).unwrap(), 4);
    }

    #[test]
    fn tuple_count_identity_transpose() {
        let p = PairPartition::from_blocks(2, &[(1, 2)]).unwrap();
        let id = EntryPermutation::identity(3);
        let t = EntryPermutation::transpose(3);
        assert_eq!(tuple_count(&p, &[&id, &t], DEFAULT_BUDGET).unwrap(), 3);
    }

    #[test]
    fn tuple_count_matches_naive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for n in [2usize, 3] {
            for m in [2usize, 4] {
                for _ in 0..4 {
                    let perms: Vec<EntryPermutation> =
                        (0..m).map(|_| random_entry_perm(n, &mut rng)).collect();
                    let refs: Vec<&EntryPermutation> = perms.iter().collect();
                    for_each_pairing(m, |p| {
                        assert_eq!(
                            tuple_count(p, &refs, DEFAULT_BUDGET).unwrap(),
                            tuple_count_naive(p, &refs),
                            "{p:?}"
                        );
                    })
                    .unwrap();
                }
            }
        }
    }

    #[test]
    fn v_is_one_for_adjoint_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let p = PairPartition::from_blocks(2, &[(1, 2)]).unwrap();
        for _ in 0..5 {
            let sigma2 = random_entry_perm(4, &mut rng);
            let sigma1 = sigma2.conjugate_by_t();
            let v = v_exact(&p, &[&sigma1, &sigma2], DEFAULT_BUDGET).unwrap();
            assert!(v.is_one());
        }
    }

    #[test]
    fn v_examples_for_identity_words() {
        let id5 = EntryPermutation::identity(5);
        let crossing = PairPartition::from_blocks(4, &[(1, 3), (2, 4)]).unwrap();
        let v = v_exact(&crossing, &[&id5; 4], DEFAULT_BUDGET).unwrap();
        assert_eq!(v, big_ratio(1, 25));

        let id3 = EntryPermutation::identity(3);
        let adjacent = PairPartition::from_blocks(4, &[(1, 2), (3, 4)]).unwrap();
        let v = v_exact(&adjacent, &[&id3; 4], DEFAULT_BUDGET).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn moment_of_square_is_one() {
        for n in [1usize, 2, 5, 8] {
            let id = EntryPermutation::identity(n);
            let m = exact_moment(&[id.clone(), id], DEFAULT_BUDGET).unwrap();
            assert!(m.value.is_one(), "n = {n}");
        }
    }

    #[test]
    fn moment_of_fourth_power() {
        for n in [2usize, 3, 4] {
            let id = EntryPermutation::identity(n);
            let m = exact_moment(&vec![id; 4], DEFAULT_BUDGET).unwrap();
            let expected = big_ratio(2 * (n * n) as i64 + 1, (n * n) as i64);
            assert_eq!(m.value, expected, "n = {n}");
            assert_eq!(m.per_pairing.len(), 3);
        }
    }

    #[test]
    fn moment_identity_transpose_word() {
        let id = EntryPermutation::identity(3);
        let t = EntryPermutation::transpose(3);
        let m = exact_moment(&[id, t], DEFAULT_BUDGET).unwrap();
        assert_eq!(m.value, big_ratio(1, 3));
    }

    #[test]
    fn odd_words_vanish() {
        let id = EntryPermutation::identity(4);
        for m in [1usize, 3, 5] {
            let res = exact_moment(&vec![id.clone(); m], DEFAULT_BUDGET).unwrap();
            assert!(res.value.is_zero());
            assert!(res.per_pairing.is_empty());
        }
    }

    #[test]
    fn cyclic_invariance_of_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for n in [2usize, 3, 4] {
            for m in [2usize, 4, 6] {
                let perms: Vec<EntryPermutation> =
                    (0..m).map(|_| random_entry_perm(n, &mut rng)).collect();
                let base = exact_moment(&perms, DEFAULT_BUDGET).unwrap().value;
                for shift in 1..m {
                    let mut rotated = perms.clone();
                    rotated.rotate_left(shift);
                    let rot = exact_moment(&rotated, DEFAULT_BUDGET).unwrap().value;
                    assert_eq!(base, rot, "n = {n}, m = {m}, shift = {shift}");
                }
            }
        }
    }

    #[test]
    fn adjacent_adjoint_block_reduces() {
        // If σ1 = t∘σ2∘t, removing an adjacent (1,2) block leaves V intact.
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for n in [2usize, 3, 4] {
            for m in [4usize, 6] {
                let mut perms: Vec<EntryPermutation> =
                    (0..m).map(|_| random_entry_perm(n, &mut rng)).collect();
                perms[0] = perms[1].conjugate_by_t();
                let refs: Vec<&EntryPermutation> = perms.iter().collect();
                let tail: Vec<&EntryPermutation> = perms[2..].iter().collect();
                for_each_pairing(m - 2, |inner| {
                    // embed inner pairing on {3..m} and prepend block (1,2)
                    let mut blocks = vec![(1usize, 2usize)];
                    for (a, b) in inner.blocks() {
                        blocks.push((a + 2, b + 2));
                    }
                    let outer = PairPartition::from_blocks(m, &blocks).unwrap();
                    let v_outer = v_exact(&outer, &refs, DEFAULT_BUDGET).unwrap();
                    let v_inner = v_exact(inner, &tail, DEFAULT_BUDGET).unwrap();
                    assert_eq!(v_outer, v_inner);
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn crossing_contributions_stay_small() {
        // Crossing pairings have V ≤ 1/N on every tested instance.
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for n in [2usize, 3, 4] {
            for m in [4usize, 6] {
                let perms: Vec<EntryPermutation> =
                    (0..m).map(|_| random_entry_perm(n, &mut rng)).collect();
                let refs: Vec<&EntryPermutation> = perms.iter().collect();
                let bound = big_ratio(1, n as i64);
                for_each_pairing(m, |p| {
                    if !p.is_noncrossing() {
                        let v = v_exact(p, &refs, DEFAULT_BUDGET).unwrap();
                        assert!(v <= bound, "V = {v} at n = {n}, {p:?}");
                    }
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn interval_blocks_bounded_by_collision_statistic() {
        // For π with block (k, k+1): V ≤ j(σ_k, σ_{k+1}) / N².
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        for n in [2usize, 3] {
            for _ in 0..3 {
                let perms: Vec<EntryPermutation> =
                    (0..4).map(|_| random_entry_perm(n, &mut rng)).collect();
                let refs: Vec<&EntryPermutation> = perms.iter().collect();
                for_each_pairing(4, |p| {
                    for k in 0..3 {
                        if p.mate(k) == k + 1 {
                            let j = crate::conditions::j_statistic(refs[k], refs[k + 1]).unwrap();
                            let v = v_exact(p, &refs, DEFAULT_BUDGET).unwrap();
                            let bound = big_ratio(j as i64, (n * n) as i64);
                            assert!(v <= bound, "V = {v}, bound = {bound}");
                        }
                    }
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let id = EntryPermutation::identity(8);
        let res = exact_moment(&vec![id; 6], 100);
        match res {
            Err(Error::BudgetExceeded { budget: 100, .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn asymptotic_check_fourth_power() {
        let reg = SchemeRegistry::with_builtins();
        let word = MomentWord::gaussians(&["id", "id", "id", "id"]).unwrap();
        let kinds = std::collections::BTreeMap::new();
        let rep = asymptotic_check(&word, &reg, &kinds, &[2, 4, 8], DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.prediction, 2);
        for row in &rep.rows {
            let nn = (row.side * row.side) as i64;
            assert_eq!(row.value, big_ratio(2 * nn + 1, nn));
        }
        assert!(rep.rows.windows(2).all(|w| w[1].gap < w[0].gap));
    }

    #[test]
    fn asymptotic_check_partial_transpose_square() {
        // E∘tr((G^Γ)²) = 1 exactly: Γ is symmetric.
        let reg = SchemeRegistry::with_builtins();
        let word = MomentWord::gaussians(&["gamma", "gamma"]).unwrap();
        let kinds = std::collections::BTreeMap::new();
        let rep = asymptotic_check(&word, &reg, &kinds, &[4], DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.prediction, 1);
        assert!(rep.rows[0].value.is_one());
        assert_eq!(rep.rows[0].gap, 0.0);
        let _ = partial_transpose_scheme();
    }

    #[test]
    fn moment_json_shape() {
        let id = EntryPermutation::identity(2);
        let m = exact_moment(&[id.clone(), id], DEFAULT_BUDGET).unwrap();
        let v = m.to_json(&["id".into(), "id".into()]);
        assert_eq!(v["N"], 2);
        assert_eq!(v["value"], "1");
        assert_eq!(v["per_pairing"][0]["blocks"][0][0], 1);
    }
}
