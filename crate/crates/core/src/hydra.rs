//! The battle engine.
//!
//! A hydra is a positive word on `a_1, a_2, ...`. One strike removes the
//! first letter, after which every surviving `a_i` with `i > 1` regenerates
//! to `a_i a_{i-1}`. The battle ends at the empty word; `duration(w)` is the
//! number of strikes. `hydra_h(k, n)` is the duration for `a_k^n`, and
//! `phi(k, n)` the duration for `theta^n(a_k)`; both are computed from their
//! recursions
//!
//! ```text
//! H_k(n+1)     = H_k(n) + phi_k(H_k(n))
//! phi_{k+1}(n+1) = phi_{k+1}(n) + phi_k(phi_{k+1}(n) + n)
//! ```
//!
//! with `phi_1 = 1`, `phi_2(n) = n + 1` (on all of Z) and `phi_k(0) = 1`,
//! never by fighting: battles take time proportional to their duration,
//! the recursions take time proportional to `n`.
//!
//! Hydra words are run-length encoded. An `a_1` run of any multiplicity is
//! struck in one batch (striking `a_1` regenerates nothing in its place),
//! which keeps battle cost proportional to the run count rather than to the
//! astronomically larger letter count.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::{BudgetExceeded, BudgetKind, EvalBudget, Gas};
use crate::hword::HWord;
use crate::words::FreeWord;

/// One run of a hydra word: `count` copies of `a_index`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HydraRun {
    pub index: u32,
    pub count: BigUint,
}

/// A positive word on `a_1, a_2, ...`, run-length encoded.
///
/// Invariants: indices are at least 1, counts at least 1, and adjacent runs
/// carry distinct indices. The empty sequence is the defeated hydra.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HydraWord {
    runs: Vec<HydraRun>,
}

/// Errors from fighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HydraError {
    /// A strike was requested on the empty word.
    EmptyHydra,
    Budget(BudgetExceeded),
}

impl fmt::Display for HydraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HydraError::EmptyHydra => write!(f, "the hydra is already defeated"),
            HydraError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl From<BudgetExceeded> for HydraError {
    fn from(b: BudgetExceeded) -> Self {
        HydraError::Budget(b)
    }
}

impl HydraWord {
    pub fn empty() -> HydraWord {
        HydraWord::default()
    }

    /// Build from `(index, count)` pairs; merges adjacent equal indices and
    /// drops zero counts. Panics on a zero index.
    pub fn from_runs<I>(runs: I) -> HydraWord
    where
        I: IntoIterator<Item = (u32, BigUint)>,
    {
        let mut out: Vec<HydraRun> = Vec::new();
        for (index, count) in runs {
            assert!(index >= 1, "hydra letters are indexed from 1");
            if count.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.index == index => last.count += count,
                _ => out.push(HydraRun { index, count }),
            }
        }
        HydraWord { runs: out }
    }

    /// Build `a_k^n`.
    pub fn power(k: u32, n: u64) -> HydraWord {
        HydraWord::from_runs([(k, BigUint::from(n))])
    }

    /// View a positive free word as a hydra.
    pub fn from_positive(w: &FreeWord) -> Option<HydraWord> {
        if !w.is_positive() {
            return None;
        }
        Some(HydraWord::from_runs(
            w.letters().iter().map(|l| (l.index(), BigUint::one())),
        ))
    }

    pub fn runs(&self) -> &[HydraRun] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total letter count.
    pub fn len(&self) -> BigUint {
        self.runs.iter().map(|r| &r.count).sum()
    }

    /// The word as a flat `FreeWord`; `None` when it would not fit in memory.
    pub fn to_free_word(&self) -> Option<FreeWord> {
        let mut letters = Vec::new();
        for run in &self.runs {
            let c = run.count.to_usize()?;
            letters.extend(core::iter::repeat_n(crate::words::Letter::positive(run.index), c));
        }
        Some(FreeWord::from_letters(letters))
    }
}

impl fmt::Display for HydraWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::write_big_runs(
            f,
            self.runs
                .iter()
                .map(|r| ("a", r.index, r.count.clone().into())),
        )
    }
}

impl fmt::Debug for HydraWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Result of a battle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BattleResult {
    /// Number of strikes needed to defeat the hydra.
    pub duration: BigUint,
    /// When requested, the word `x_{i_1} x_{i_2} ...` on the subgroup
    /// generators where `i_j` is the index struck at step `j`.
    pub transcript: Option<HWord>,
}

/// Strike once: remove the first letter, regenerate the rest.
pub fn strike(w: &HydraWord) -> Result<HydraWord, HydraError> {
    if w.is_empty() {
        return Err(HydraError::EmptyHydra);
    }
    // Generous internal budget: a single strike is only used at desk scale.
    let budget = EvalBudget::new(u64::MAX, u64::MAX);
    let mut gas = Gas::new(&budget);
    let mut engine = Battle::new(w.clone(), false);
    engine.strike_batch(&mut gas, true)?;
    Ok(HydraWord { runs: engine.word })
}

/// Fight the whole battle.
pub fn battle(
    w: &HydraWord,
    budget: &EvalBudget,
    want_transcript: bool,
) -> Result<BattleResult, BudgetExceeded> {
    let mut gas = Gas::new(budget);
    battle_gas(w, &mut gas, want_transcript)
}

pub(crate) fn battle_gas(
    w: &HydraWord,
    gas: &mut Gas<'_>,
    want_transcript: bool,
) -> Result<BattleResult, BudgetExceeded> {
    let mut engine = Battle::new(w.clone(), want_transcript);
    while !engine.word.is_empty() {
        match engine.strike_batch(gas, false) {
            Ok(()) => {}
            Err(HydraError::Budget(b)) => return Err(b),
            Err(HydraError::EmptyHydra) => unreachable!("checked nonempty"),
        }
    }
    Ok(BattleResult {
        duration: engine.duration,
        transcript: engine.transcript.map(HWord::from_big_runs),
    })
}

/// The battle transcript of a positive word, as a word on the subgroup
/// generators `x_i = a_i t`. It evaluates to `(w, duration(w))` and its
/// letter count is `duration(w)`.
///
/// This works for any positive word, not just `a_k^n`: each strike pairs
/// the removed letter `a_i` with one `t`, and the `t` that conjugates in
/// from the right regenerates the intervening suffix, so reading off one
/// `x_i` per strike spells `w t^{duration(w)}` exactly.
pub fn transcript_to_hword(w: &FreeWord, budget: &EvalBudget) -> Result<HWord, BudgetExceeded> {
    let hydra = HydraWord::from_positive(w).expect("transcript of a non-positive word");
    Ok(battle(&hydra, budget, true)?
        .transcript
        .expect("transcript requested"))
}

struct Battle {
    word: Vec<HydraRun>,
    duration: BigUint,
    transcript: Option<Vec<(u32, BigUint)>>,
}

impl Battle {
    fn new(w: HydraWord, want_transcript: bool) -> Battle {
        Battle {
            word: w.runs,
            duration: BigUint::zero(),
            transcript: want_transcript.then(Vec::new),
        }
    }

    /// Strike the leading run: one strike for a regenerating letter, the
    /// whole run at once for an `a_1` run. `single` limits an `a_1` batch to
    /// one strike (used by the public single-step `strike`).
    fn strike_batch(&mut self, gas: &mut Gas<'_>, single: bool) -> Result<(), HydraError> {
        let first = self.word.first().cloned().ok_or(HydraError::EmptyHydra)?;
        let (struck, theta_power) = if first.index == 1 {
            let n = if single {
                BigUint::one()
            } else {
                first.count.clone()
            };
            (n.clone(), n)
        } else {
            (BigUint::one(), BigUint::one())
        };

        // strikes count against the step budget
        gas.spend_big(&struck)?;
        self.duration += &struck;
        if let Some(t) = &mut self.transcript {
            t.push((first.index, struck.clone()));
        }

        // remove the struck letters from the leading run
        if first.count == struck {
            self.word.remove(0);
        } else {
            self.word[0].count = &first.count - &struck;
        }

        // regenerate: apply theta^m to everything that remains
        let m = match theta_power.to_u64() {
            Some(m) => m,
            // a run that long cannot be regenerated within any step budget
            None => {
                return Err(HydraError::Budget(BudgetExceeded {
                    kind: BudgetKind::Steps,
                }))
            }
        };
        if m > 0 && self.word.iter().any(|r| r.index > 1) {
            self.word = theta_runs(&self.word, m, gas)?;
        }
        for run in &self.word {
            gas.check_bits_uint(&run.count)?;
        }
        Ok(())
    }
}

/// `theta^m` of an RLE word. `theta^m(a_i) = a_i theta^0(a_{i-1}) ... theta^{m-1}(a_{i-1})`,
/// so each regenerating run unfolds block by block; produced runs are charged
/// as steps.
fn theta_runs(
    runs: &[HydraRun],
    m: u64,
    gas: &mut Gas<'_>,
) -> Result<Vec<HydraRun>, BudgetExceeded> {
    let mut out: Vec<HydraRun> = Vec::new();
    let mut push = |index: u32, count: BigUint, gas: &mut Gas<'_>| -> Result<(), BudgetExceeded> {
        if count.is_zero() {
            return Ok(());
        }
        gas.step()?;
        match out.last_mut() {
            Some(last) if last.index == index => last.count += count,
            _ => out.push(HydraRun { index, count }),
        }
        Ok(())
    };

    // theta^m(a_i) for one letter, emitted as runs
    fn emit_letter(
        index: u32,
        m: u64,
        push: &mut dyn FnMut(u32, BigUint, &mut Gas<'_>) -> Result<(), BudgetExceeded>,
        gas: &mut Gas<'_>,
    ) -> Result<(), BudgetExceeded> {
        match index {
            1 => push(1, BigUint::one(), gas),
            // theta^m(a_2) = a_2 a_1^m, kept as two runs
            2 => {
                push(2, BigUint::one(), gas)?;
                push(1, BigUint::from(m), gas)
            }
            _ => {
                push(index, BigUint::one(), gas)?;
                for j in 0..m {
                    emit_letter(index - 1, j, push, gas)?;
                }
                Ok(())
            }
        }
    }

    for run in runs {
        if run.index == 1 {
            push(1, run.count.clone(), gas)?;
        } else {
            let reps = run.count.to_u64().ok_or(BudgetExceeded {
                kind: BudgetKind::Steps,
            })?;
            for _ in 0..reps {
                emit_letter(run.index, m, &mut push, gas)?;
            }
        }
    }
    Ok(out)
}

/// Shared memoised evaluator for the duration recursions. The memo holds
/// only exact in-budget values, so sharing it never changes a result.
#[derive(Default)]
pub struct PhiEvaluator {
    memo: BTreeMap<(u32, BigInt), BigInt>,
}

/// `phi(k, n)` outcomes beyond a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiError {
    /// `theta^n(a_k)` meets no coset of the subgroup: `k >= 3` and `n < 0`.
    NotInDomain,
    Budget(BudgetExceeded),
}

impl fmt::Display for PhiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiError::NotInDomain => write!(f, "phi is undefined here (k >= 3 needs n >= 0)"),
            PhiError::Budget(b) => write!(f, "{b}"),
        }
    }
}

impl From<BudgetExceeded> for PhiError {
    fn from(b: BudgetExceeded) -> Self {
        PhiError::Budget(b)
    }
}

impl PhiEvaluator {
    pub fn new() -> Self {
        PhiEvaluator::default()
    }

    /// `phi_k(n)`: defined on all of `Z` for `k <= 2` (`phi_1 = 1`,
    /// `phi_2(n) = n + 1`, possibly negative), and on `n >= 0` for `k >= 3`
    /// via the memoised recursion.
    pub fn phi(&mut self, k: u32, n: &BigInt, budget: &EvalBudget) -> Result<BigInt, PhiError> {
        let mut gas = Gas::new(budget);
        self.phi_gas(k, n, &mut gas)
    }

    pub(crate) fn phi_gas(
        &mut self,
        k: u32,
        n: &BigInt,
        gas: &mut Gas<'_>,
    ) -> Result<BigInt, PhiError> {
        assert!(k >= 1, "phi index starts at 1");
        match k {
            1 => Ok(BigInt::one()),
            2 => {
                let v = n + 1;
                gas.check_bits_int(&v)?;
                Ok(v)
            }
            _ => {
                if n.is_negative() {
                    return Err(PhiError::NotInDomain);
                }
                // walk the recursion up from the largest memoised point
                let mut i: BigInt;
                let mut v: BigInt;
                let range = (k, BigInt::zero())..=(k, n.clone());
                if let Some(((_, mi), mv)) = self.memo.range(range).next_back() {
                    i = mi.clone();
                    v = mv.clone();
                } else {
                    i = BigInt::zero();
                    v = BigInt::one(); // phi_k(0) = 1
                    self.memo.insert((k, i.clone()), v.clone());
                }
                // remaining unfoldings must fit the step budget
                gas.spend_big((n - &i).magnitude())?;
                while &i < n {
                    let arg = &v + &i;
                    let inc = self.phi_gas(k - 1, &arg, gas)?;
                    v += inc;
                    i += 1;
                    gas.check_bits_int(&v)?;
                    self.memo.insert((k, i.clone()), v.clone());
                }
                Ok(v)
            }
        }
    }

    /// `H_k(n)`, the battle duration of `a_k^n`, via its recursion.
    pub fn hydra_h(
        &mut self,
        k: u32,
        n: u64,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.hydra_h_gas(k, n, &mut gas)
    }

    pub(crate) fn hydra_h_gas(
        &mut self,
        k: u32,
        n: u64,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        assert!(k >= 1, "hydra functions are indexed from 1");
        gas.spend(n)?;
        let mut h = BigInt::zero();
        for _ in 0..n {
            let inc = match self.phi_gas(k, &h, gas) {
                Ok(v) => v,
                Err(PhiError::Budget(b)) => return Err(b),
                // h >= 0 throughout, so the recursion stays in domain
                Err(PhiError::NotInDomain) => unreachable!("phi called on negative duration"),
            };
            h += inc;
            gas.check_bits_int(&h)?;
        }
        Ok(h.to_biguint().expect("durations are nonnegative"))
    }
}

/// One-shot `phi_k(n)`.
pub fn phi(k: u32, n: i64, budget: &EvalBudget) -> Result<BigInt, PhiError> {
    PhiEvaluator::new().phi(k, &BigInt::from(n), budget)
}

/// One-shot `H_k(n)`.
pub fn hydra_h(k: u32, n: u64, budget: &EvalBudget) -> Result<BigUint, BudgetExceeded> {
    PhiEvaluator::new().hydra_h(k, n, budget)
}
