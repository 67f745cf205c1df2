//! The automorphism `theta` of `F(a_1, a_2, ...)`:
//!
//! ```text
//! theta(a_1) = a_1,    theta(a_i) = a_i a_{i-1}   (i > 1)
//! ```
//!
//! and its integer powers. `theta^n(a_k^{+-1})` is computed from the closed
//! recursive expansions
//!
//! ```text
//! theta^n(a_k)    = a_k theta^0(a_{k-1}) theta^1(a_{k-1}) ... theta^{n-1}(a_{k-1})      n > 0
//! theta^n(a_k)    = a_k theta^{-1}(a_{k-1}^-1) theta^{-2}(a_{k-1}^-1) ... theta^n(a_{k-1}^-1)   n < 0
//! theta^n(a_k^-1) = theta^{n-1}(a_{k-1}^-1) ... theta^0(a_{k-1}^-1) a_k^-1              n > 0
//! theta^n(a_k^-1) = theta^n(a_{k-1}) theta^{n+1}(a_{k-1}) ... theta^{-1}(a_{k-1}) a_k^-1  n < 0
//! ```
//!
//! with `theta^n(a_1^{+-1}) = a_1^{+-1}`. These expansions are reduced words.
//! In particular `theta^-1(a_1) = a_1` and `theta^-1(a_i) = a_i (theta^-1(a_{i-1}))^-1`,
//! which round-trips with `theta` on every tested word.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::budget::{BudgetExceeded, EvalBudget, Gas};
use crate::words::{push_reduced, FreeWord, Letter};

/// Memoising expander for `theta^n` on letters and words.
///
/// The memo only ever holds exact expansions, so sharing an expander across
/// calls cannot change any result. Word lengths grow polynomially of degree
/// about `|n|^(k-1)`; produced letters are charged against the step budget.
#[derive(Default)]
pub struct ThetaExpander {
    memo: BTreeMap<(u32, i64, bool), FreeWord>,
}

impl ThetaExpander {
    pub fn new() -> Self {
        ThetaExpander::default()
    }

    /// `theta^n(a_k^{+-1})` as a reduced word.
    pub fn expand_letter(
        &mut self,
        k: u32,
        n: i64,
        positive: bool,
        budget: &EvalBudget,
    ) -> Result<FreeWord, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.expand_letter_gas(k, n, positive, &mut gas)
    }

    pub(crate) fn expand_letter_gas(
        &mut self,
        k: u32,
        n: i64,
        positive: bool,
        gas: &mut Gas<'_>,
    ) -> Result<FreeWord, BudgetExceeded> {
        assert!(k >= 1, "letter index must be at least 1");
        if k == 1 {
            gas.step()?;
            return Ok(FreeWord::from_letters([Letter::new(1, positive)]));
        }
        if let Some(w) = self.memo.get(&(k, n, positive)) {
            gas.spend(w.len() as u64)?;
            return Ok(w.clone());
        }
        let mut letters: Vec<Letter> = Vec::new();
        if positive {
            letters.push(Letter::positive(k));
            if n > 0 {
                for j in 0..n {
                    let block = self.expand_letter_gas(k - 1, j, true, gas)?;
                    letters.extend_from_slice(block.letters());
                }
            } else {
                for j in 1..=(-n) {
                    let block = self.expand_letter_gas(k - 1, -j, false, gas)?;
                    letters.extend_from_slice(block.letters());
                }
            }
        } else {
            if n > 0 {
                for j in (0..n).rev() {
                    let block = self.expand_letter_gas(k - 1, j, false, gas)?;
                    letters.extend_from_slice(block.letters());
                }
            } else {
                for j in n..0 {
                    let block = self.expand_letter_gas(k - 1, j, true, gas)?;
                    letters.extend_from_slice(block.letters());
                }
            }
            letters.push(Letter::negative(k));
        }
        gas.spend(letters.len() as u64)?;
        let raw_len = letters.len();
        let word = FreeWord::from_letters(letters);
        // the closed-form expansions concatenate without cancellation
        debug_assert_eq!(word.len(), raw_len);
        self.memo.insert((k, n, positive), word.clone());
        Ok(word)
    }

    /// The reduced word `theta^n(w)`, computed letterwise.
    pub fn apply(
        &mut self,
        w: &FreeWord,
        n: i64,
        budget: &EvalBudget,
    ) -> Result<FreeWord, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.apply_gas(w, n, &mut gas)
    }

    pub(crate) fn apply_gas(
        &mut self,
        w: &FreeWord,
        n: i64,
        gas: &mut Gas<'_>,
    ) -> Result<FreeWord, BudgetExceeded> {
        let mut out: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            let img = self.expand_letter_gas(l.index(), n, l.is_positive(), gas)?;
            push_reduced(&mut out, img.letters().iter().copied());
        }
        Ok(FreeWord::from_letters(out))
    }
}

/// One-shot `theta^n(a_k^{+-1})`.
pub fn expand_theta_letter(
    k: u32,
    n: i64,
    positive: bool,
    budget: &EvalBudget,
) -> Result<FreeWord, BudgetExceeded> {
    ThetaExpander::new().expand_letter(k, n, positive, budget)
}

/// One-shot `theta^n(w)`.
pub fn apply_theta(w: &FreeWord, n: i64, budget: &EvalBudget) -> Result<FreeWord, BudgetExceeded> {
    ThetaExpander::new().apply(w, n, budget)
}
