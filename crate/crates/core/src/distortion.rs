//! Witness words, the brute-force ball oracle, and exact distortion tables.
//!
//! `witness_u(k, n)` is the positive word `u_{k,n}` on the `x_i` of length
//! `H_k(n)` spelling `a_k^n t^{H_k(n)}`; `witness_pair(k, n)` couples the
//! reduced subgroup word of length `2 H_k(n) + 3` with the ambient word of
//! length `2n + 4` it equals. Together they realise the distortion lower
//! bound at desk scale.
//!
//! The oracle enumerates reduced words on `x_1^{+-1}, ..., x_k^{+-1}` up to
//! a radius. The subgroup is free on those letters, so every element of the
//! ball is reached by exactly one reduced word, whose length is the exact
//! subgroup distance: no deduplication and no ordering care are needed.
//! [`build_oracle`] materialises the whole ball; [`scan_hball`] walks the
//! same tree but only records hits against a fixed target set, which is how
//! radii far beyond materialisation range stay checkable.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::budget::{BudgetExceeded, BudgetKind, EvalBudget, Gas};
use crate::group::{Collector, GLetter, GWord, NormalForm};
use crate::hword::HWord;
use crate::hydra::{battle_gas, HydraWord};
use crate::solver::{solve, CosetAnswer, CosetQuery, SolverBudget, UndecidedReason};
use crate::theta::ThetaExpander;
use crate::words::{FreeWord, Letter};

/// `u_{k,n}`: the battle transcript of `a_k^n`, of length `H_k(n)`.
pub fn witness_u(k: u32, n: u64, budget: &EvalBudget) -> Result<HWord, BudgetExceeded> {
    assert!(k >= 1 && n >= 1, "witness words need k, n >= 1");
    let mut gas = Gas::new(budget);
    Ok(battle_gas(&HydraWord::power(k, n), &mut gas, true)?
        .transcript
        .expect("transcript requested"))
}

/// A short ambient word equal to a long subgroup word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessPair {
    /// `a_k^n a_2 t a_1 a_2^-1 a_k^-n`, of length `2n + 4`.
    pub v: GWord,
    /// `u_{k,n} x_2 x_1 x_2^-1 u_{k,n}^-1`, reduced of length `2 H_k(n) + 3`.
    pub w: HWord,
    /// Both sides evaluate to the same element of `G`.
    pub verified: bool,
}

pub fn witness_pair(k: u32, n: u64, budget: &EvalBudget) -> Result<WitnessPair, BudgetExceeded> {
    assert!(k >= 2, "the pair construction needs k >= 2");
    assert!(n >= 1, "witness words need n >= 1");
    let u = witness_u(k, n, budget)?;

    let mut letters: Vec<GLetter> = Vec::new();
    for _ in 0..n {
        letters.push(GLetter::A(Letter::positive(k)));
    }
    letters.extend([
        GLetter::A(Letter::positive(2)),
        GLetter::T(true),
        GLetter::A(Letter::positive(1)),
        GLetter::A(Letter::negative(2)),
    ]);
    for _ in 0..n {
        letters.push(GLetter::A(Letter::negative(k)));
    }
    let v = GWord::from_letters(letters);

    let middle = HWord::from_runs([
        (2, BigInt::from(1)),
        (1, BigInt::from(1)),
        (2, BigInt::from(-1)),
    ]);
    let w = u.concat(&middle).concat(&u.inverse());

    let mut collector = Collector::new();
    let verified = collector.collect(&v, budget)? == collector.eval_hword(&w, budget)?;
    Ok(WitnessPair { v, w, verified })
}

/// What the oracle knows about one element of the ball.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleEntry {
    /// Exact subgroup distance from the identity.
    pub min_length: u64,
    /// The unique reduced word realising it.
    pub witness: HWord,
}

/// Exhaustive index of the radius-`radius` ball of the rank-`k` subgroup,
/// keyed by normal form.
pub struct OracleIndex {
    k: u32,
    radius: u32,
    map: BTreeMap<NormalForm, OracleEntry>,
}

/// The oracle's answer on `t^r w`: the membership exponent when the witness
/// lies inside the ball, unknown otherwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleVerdict {
    Member {
        s: i64,
        min_length: u64,
        witness: HWord,
    },
    Unknown,
}

impl OracleIndex {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, nf: &NormalForm) -> Option<&OracleEntry> {
        self.map.get(nf)
    }

    /// Entries in sorted key order.
    pub fn entries(&self) -> impl Iterator<Item = (&NormalForm, &OracleEntry)> {
        self.map.iter()
    }

    /// Rebuild from persisted entries (inverse of [`OracleIndex::entries`]).
    pub fn from_entries<I>(k: u32, radius: u32, entries: I) -> OracleIndex
    where
        I: IntoIterator<Item = (NormalForm, OracleEntry)>,
    {
        OracleIndex {
            k,
            radius,
            map: entries.into_iter().collect(),
        }
    }

    /// Membership of `t^r w` in some `H t^s`: `t^r w = theta^-r(w) t^r`, so
    /// it lies in `H t^s` exactly when the key `(theta^-r(w), r - s)` is
    /// indexed. Scans the possible `t`-exponents `|r - s| <= radius`.
    pub fn member(&self, r: i64, w: &FreeWord, budget: &EvalBudget) -> OracleVerdict {
        let shifted = match ThetaExpander::new().apply(w, -r, budget) {
            Ok(v) => v,
            Err(_) => return OracleVerdict::Unknown,
        };
        let radius = i64::from(self.radius);
        let mut found: Option<(i64, &OracleEntry)> = None;
        for rho in -radius..=radius {
            if let Some(entry) = self.map.get(&NormalForm::new(shifted.clone(), rho)) {
                // the membership exponent is unique
                assert!(found.is_none(), "two cosets share an element");
                found = Some((rho, entry));
            }
        }
        match found {
            Some((rho, entry)) => OracleVerdict::Member {
                s: r - rho,
                min_length: entry.min_length,
                witness: entry.witness.clone(),
            },
            None => OracleVerdict::Unknown,
        }
    }
}

/// Materialise the whole ball. Grows like `(2k-1)^radius`; the step budget
/// is charged per visited word.
pub fn build_oracle(
    k: u32,
    radius: u32,
    budget: &EvalBudget,
) -> Result<OracleIndex, BudgetExceeded> {
    let mut gas = Gas::new(budget);
    let mut map: BTreeMap<NormalForm, OracleEntry> = BTreeMap::new();
    let mut overflow: Result<(), BudgetExceeded> = Ok(());
    {
        let mut visit = |state: &WalkState| {
            if overflow.is_err() {
                return;
            }
            if let Err(b) = gas.step() {
                overflow = Err(b);
                return;
            }
            let nf = NormalForm::new(FreeWord::from_letters(state.v.iter().copied()), state.t_exp);
            let entry = OracleEntry {
                min_length: state.xword.len() as u64,
                witness: state.hword(),
            };
            let previous = map.insert(nf, entry);
            assert!(
                previous.is_none(),
                "distinct reduced words must name distinct elements"
            );
        };
        walk_hball(k, radius, &mut visit);
    }
    overflow?;
    Ok(OracleIndex { k, radius, map })
}

/// One oracle hit against a target `v`-word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TargetHit {
    /// The `t`-exponent of the element's normal form.
    pub t_exponent: i64,
    /// Exact subgroup distance (the depth at which the hit occurred).
    pub length: u64,
    pub witness: HWord,
}

/// Walk the ball of radius `radius` and record, for each target word `v`,
/// every element `v t^rho` encountered. Nothing is materialised, so radii
/// far beyond [`build_oracle`] range are feasible; cost is one tree walk of
/// `(2k-1)^radius` nodes regardless of target count.
pub fn scan_hball(k: u32, radius: u32, targets: &[FreeWord]) -> Vec<Vec<TargetHit>> {
    let mut hits: Vec<Vec<TargetHit>> = targets.iter().map(|_| Vec::new()).collect();

    // (length, hash) -> target indices, probed once per node
    let mut probe: BTreeMap<(u32, u64), Vec<u32>> = BTreeMap::new();
    for (i, t) in targets.iter().enumerate() {
        let mut h = HASH_SEED;
        for l in t.letters() {
            h = hash_push(h, *l);
        }
        probe.entry((t.len() as u32, h)).or_default().push(i as u32);
    }

    let mut visit = |state: &WalkState| {
        let key = (state.v.len() as u32, state.hash_top());
        if let Some(indices) = probe.get(&key) {
            for &i in indices {
                let target = &targets[i as usize];
                if target.letters() == state.v.as_slice() {
                    let hit = TargetHit {
                        t_exponent: state.t_exp,
                        length: state.xword.len() as u64,
                        witness: state.hword(),
                    };
                    let known = &mut hits[i as usize];
                    // freeness: one reduced word per element
                    assert!(
                        known.iter().all(|h| h.t_exponent != hit.t_exponent),
                        "element revisited during ball walk"
                    );
                    known.push(hit);
                }
            }
        }
    };
    walk_hball(k, radius, &mut visit);
    hits
}

const HASH_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn hash_push(h: u64, l: Letter) -> u64 {
    h.wrapping_mul(0x100_0000_01b3)
        .wrapping_add(l.code() as u32 as u64)
}

/// Shared walker state; exposed to visitors read-only.
struct WalkState {
    /// Reduced `v`-part of the current element's normal form.
    v: Vec<Letter>,
    /// Rolling prefix hashes of `v`; `prefix_hash[i]` hashes `v[..i]`.
    prefix_hash: Vec<u64>,
    /// `t`-part of the normal form.
    t_exp: i64,
    /// The current reduced `x`-word, letter by letter.
    xword: Vec<(u32, bool)>,
}

impl WalkState {
    fn hash_top(&self) -> u64 {
        *self.prefix_hash.last().expect("seed entry")
    }

    fn hword(&self) -> HWord {
        HWord::from_runs(self.xword.iter().map(|&(i, pos)| {
            (
                i,
                if pos {
                    BigInt::from(1)
                } else {
                    BigInt::from(-1)
                },
            )
        }))
    }
}

/// Depth-first walk over all reduced words on `x_1^{+-1}, ..., x_k^{+-1}`
/// of length <= radius, maintaining the normal form incrementally.
fn walk_hball(k: u32, radius: u32, visit: &mut dyn FnMut(&WalkState)) {
    assert!(k >= 1, "subgroup rank starts at 1");
    let r = i64::from(radius);

    // theta^n(a_i^{+-1}) for every exponent the walk can need
    let budget = EvalBudget::new(u64::MAX, u64::MAX);
    let mut expander = ThetaExpander::new();
    let mut images: BTreeMap<(u32, i64, bool), Vec<Letter>> = BTreeMap::new();
    for i in 1..=k {
        for n in -r..=r {
            for pos in [true, false] {
                let w = expander
                    .expand_letter(i, n, pos, &budget)
                    .expect("unbudgeted expansion");
                images.insert((i, n, pos), w.letters().to_vec());
            }
        }
    }

    let mut state = WalkState {
        v: Vec::new(),
        prefix_hash: alloc::vec![HASH_SEED],
        t_exp: 0,
        xword: Vec::new(),
    };
    let mut scratch: Vec<Letter> = Vec::new();

    // Push the image letters with cancellation; returns (pushed, popped)
    // where popped letters went onto the scratch stack.
    fn apply(state: &mut WalkState, scratch: &mut Vec<Letter>, image: &[Letter]) -> (u32, u32) {
        let (mut pushed, mut popped) = (0u32, 0u32);
        for &l in image {
            if state.v.last() == Some(&l.inverse()) {
                let gone = state.v.pop().expect("nonempty");
                state.prefix_hash.pop();
                if pushed > 0 {
                    pushed -= 1;
                } else {
                    scratch.push(gone);
                    popped += 1;
                }
            } else {
                state.prefix_hash.push(hash_push(state.hash_top(), l));
                state.v.push(l);
                pushed += 1;
            }
        }
        (pushed, popped)
    }

    fn undo(state: &mut WalkState, scratch: &mut Vec<Letter>, pushed: u32, popped: u32) {
        for _ in 0..pushed {
            state.v.pop();
            state.prefix_hash.pop();
        }
        for _ in 0..popped {
            let l = scratch.pop().expect("scratch underflow");
            state.prefix_hash.push(hash_push(state.hash_top(), l));
            state.v.push(l);
        }
    }

    struct Rec<'a> {
        k: u32,
        radius: u32,
        images: &'a BTreeMap<(u32, i64, bool), Vec<Letter>>,
    }

    impl Rec<'_> {
        fn go(
            &self,
            state: &mut WalkState,
            scratch: &mut Vec<Letter>,
            visit: &mut dyn FnMut(&WalkState),
        ) {
            visit(state);
            if state.xword.len() as u32 == self.radius {
                return;
            }
            let last = state.xword.last().copied();
            for i in 1..=self.k {
                for pos in [true, false] {
                    if last == Some((i, !pos)) {
                        continue; // keep the x-word reduced
                    }
                    // x_i = a_i t appends theta^-t_exp(a_i) then bumps t;
                    // x_i^-1 = t^-1 a_i^-1 drops t then appends the inverse
                    let (exp, bump) = if pos {
                        (state.t_exp, 1)
                    } else {
                        (state.t_exp - 1, -1)
                    };
                    let image = &self.images[&(i, -exp, pos)];
                    let (pushed, popped) = apply(state, scratch, image);
                    state.t_exp += bump;
                    state.xword.push((i, pos));

                    self.go(state, scratch, visit);

                    state.xword.pop();
                    state.t_exp -= bump;
                    undo(state, scratch, pushed, popped);
                }
            }
        }
    }

    Rec {
        k,
        radius,
        images: &images,
    }
    .go(&mut state, &mut scratch, visit);
}

/// One row of a distortion table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DistortionRow {
    pub n: u64,
    pub dist: u64,
}

/// Exact values of `Dist(n) = max { d_H(1, g) : g in H, d_G(1, g) <= n }`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistortionTable {
    pub k: u32,
    pub rows: Vec<DistortionRow>,
}

/// Measure distortion exactly by a breadth-first walk of the ball of `G_k`
/// over the generators `a_1, ..., a_k, t`. Elements are deduplicated by
/// normal form; membership and subgroup distance come from the solver,
/// whose witnesses are geodesic once reduced.
///
/// The step budget caps the number of ball elements and, separately, the
/// work spent on any single element; a trip anywhere makes the whole table
/// unreliable and is reported as an error.
pub fn distortion_table(
    k: u32,
    n_max: u64,
    budget: &SolverBudget,
) -> Result<DistortionTable, BudgetExceeded> {
    assert!(k >= 1, "group rank starts at 1");
    let mut count_gas = Gas::new(&budget.eval);
    let mut collector = Collector::new();

    // distance in H per distinct v-part: an element v t^r lies in H exactly
    // when solve(0, v) reports exponent -r, so one query covers every r
    let mut h_distance: BTreeMap<FreeWord, Option<(i64, u64)>> = BTreeMap::new();
    let mut classify = |v: &FreeWord| -> Result<Option<(i64, u64)>, BudgetExceeded> {
        if let Some(known) = h_distance.get(v) {
            return Ok(*known);
        }
        let outcome = match solve(&CosetQuery { r: 0, w: v.clone() }, budget) {
            CosetAnswer::Member { s, sigma } => {
                let len = sigma
                    .reduced()
                    .letter_count()
                    .to_u64()
                    .ok_or(BudgetExceeded {
                        kind: BudgetKind::Steps,
                    })?;
                Some((s, len))
            }
            CosetAnswer::NotInLambda => None,
            CosetAnswer::Undecided { reason } => {
                return Err(match reason {
                    UndecidedReason::BudgetExceeded(b) => b,
                    UndecidedReason::CandidateCapReached => BudgetExceeded {
                        kind: BudgetKind::Steps,
                    },
                })
            }
        };
        h_distance.insert(v.clone(), outcome);
        Ok(outcome)
    };

    let mut rows = Vec::with_capacity(n_max as usize + 1);
    rows.push(DistortionRow { n: 0, dist: 0 });

    let mut seen: BTreeSet<NormalForm> = BTreeSet::new();
    seen.insert(NormalForm::identity());
    let mut frontier: Vec<NormalForm> = alloc::vec![NormalForm::identity()];
    let mut best: u64 = 0;

    let mut generators: Vec<NormalForm> = Vec::new();
    for i in 1..=k {
        generators.push(NormalForm::new(
            FreeWord::from_letters([Letter::positive(i)]),
            0,
        ));
        generators.push(NormalForm::new(
            FreeWord::from_letters([Letter::negative(i)]),
            0,
        ));
    }
    generators.push(NormalForm::new(FreeWord::empty(), 1));
    generators.push(NormalForm::new(FreeWord::empty(), -1));

    for n in 1..=n_max {
        let mut next: Vec<NormalForm> = Vec::new();
        for g in &frontier {
            let mut element_gas = Gas::new(&budget.eval);
            for step in &generators {
                count_gas.step()?;
                let h = collector.multiply_gas(g, step, &mut element_gas)?;
                if seen.insert(h.clone()) {
                    if let Some((s, len)) = classify(&h.v)? {
                        if s == -h.r {
                            best = best.max(len);
                        }
                    }
                    next.push(h);
                }
            }
        }
        rows.push(DistortionRow { n, dist: best });
        frontier = next;
    }

    Ok(DistortionTable { k, rows })
}
