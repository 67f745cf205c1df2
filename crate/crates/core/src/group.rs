//! Elements of the free-by-cyclic group `G = F(a_1, a_2, ...) x| <t>`,
//! where `t^-1 a_i t = theta(a_i)`.
//!
//! Every element has a unique normal form `v t^r` with `v` reduced. Moving a
//! `t^{+-1}` rightward past `a_i` applies `theta^{-+1}` to it, which is all
//! [`collect`] does. The subgroup generated by `x_i = a_i t` is free on
//! those generators; [`eval_hword`] evaluates a word on them back into `G`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, ToPrimitive};

use crate::budget::{BudgetExceeded, BudgetKind, EvalBudget, Gas};
use crate::hword::HWord;
use crate::theta::ThetaExpander;
use crate::words::{push_reduced, FreeWord, Letter};

/// A letter of a word in `G`: some `a_i^{+-1}` or `t^{+-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GLetter {
    A(Letter),
    /// `T(true)` is `t`, `T(false)` is `t^-1`.
    T(bool),
}

/// An unreduced word on the `a_i^{+-1}` and `t^{+-1}`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GWord {
    letters: Vec<GLetter>,
}

impl GWord {
    pub fn empty() -> GWord {
        GWord::default()
    }

    pub fn from_letters<I>(letters: I) -> GWord
    where
        I: IntoIterator<Item = GLetter>,
    {
        GWord {
            letters: letters.into_iter().collect(),
        }
    }

    pub fn letters(&self) -> &[GLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GWord) -> GWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GWord { letters }
    }

    pub fn inverse(&self) -> GWord {
        GWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    GLetter::A(a) => GLetter::A(a.inverse()),
                    GLetter::T(p) => GLetter::T(!p),
                })
                .collect(),
        }
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::write_gword(f, &self.letters)
    }
}

impl fmt::Debug for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The normal form `v t^r` of an element of `G`; `(e, 0)` is the identity.
///
/// Normal forms are unique, so structural equality is equality in `G`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NormalForm {
    pub v: FreeWord,
    pub r: i64,
}

impl NormalForm {
    pub fn identity() -> NormalForm {
        NormalForm::default()
    }

    pub fn new(v: FreeWord, r: i64) -> NormalForm {
        NormalForm { v, r }
    }

    pub fn is_identity(&self) -> bool {
        self.v.is_empty() && self.r == 0
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 0 {
            write!(f, "{}", self.v)
        } else if self.v.is_empty() {
            write!(f, "t^{}", self.r)
        } else {
            write!(f, "{} t^{}", self.v, self.r)
        }
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.v, self.r)
    }
}

/// Shared machinery for normal-form arithmetic: a theta expander plus the
/// fold that pushes `t` powers to the right.
#[derive(Default)]
pub struct Collector {
    theta: ThetaExpander,
}

impl Collector {
    pub fn new() -> Self {
        Collector::default()
    }

    pub fn theta_mut(&mut self) -> &mut ThetaExpander {
        &mut self.theta
    }

    /// Normal form of a word on the `a_i` and `t`.
    pub fn collect(
        &mut self,
        u: &GWord,
        budget: &EvalBudget,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.collect_gas(u, &mut gas)
    }

    pub(crate) fn collect_gas(
        &mut self,
        u: &GWord,
        gas: &mut Gas<'_>,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut v: Vec<Letter> = Vec::new();
        let mut r: i64 = 0;
        for l in u.letters() {
            gas.step()?;
            match l {
                GLetter::A(a) => {
                    let img = self
                        .theta
                        .expand_letter_gas(a.index(), -r, a.is_positive(), gas)?;
                    push_reduced(&mut v, img.letters().iter().copied());
                }
                GLetter::T(pos) => r += if *pos { 1 } else { -1 },
            }
        }
        Ok(NormalForm::new(FreeWord::from_letters(v), r))
    }

    /// Product of two normal forms: `v t^r . w t^s = v theta^-r(w) t^(r+s)`.
    pub fn multiply(
        &mut self,
        g1: &NormalForm,
        g2: &NormalForm,
        budget: &EvalBudget,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.multiply_gas(g1, g2, &mut gas)
    }

    pub(crate) fn multiply_gas(
        &mut self,
        g1: &NormalForm,
        g2: &NormalForm,
        gas: &mut Gas<'_>,
    ) -> Result<NormalForm, BudgetExceeded> {
        let shifted = self.theta.apply_gas(&g2.v, -g1.r, gas)?;
        let r = g1.r.checked_add(g2.r).ok_or(BudgetExceeded {
            kind: BudgetKind::Bits,
        })?;
        Ok(NormalForm::new(g1.v.concat(&shifted), r))
    }

    /// Inverse: `(v t^r)^-1 = theta^r(v^-1) t^-r`.
    pub fn invert(
        &mut self,
        g: &NormalForm,
        budget: &EvalBudget,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        let v = self.theta.apply_gas(&g.v.inverse(), g.r, &mut gas)?;
        Ok(NormalForm::new(v, -g.r))
    }

    /// Normal form of a word on the subgroup generators `x_i = a_i t`.
    pub fn eval_hword(
        &mut self,
        h: &HWord,
        budget: &EvalBudget,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.eval_hword_gas(h, &mut gas)
    }

    pub(crate) fn eval_hword_gas(
        &mut self,
        h: &HWord,
        gas: &mut Gas<'_>,
    ) -> Result<NormalForm, BudgetExceeded> {
        let mut v: Vec<Letter> = Vec::new();
        let mut r: i64 = 0;
        for run in h.runs() {
            gas.spend_big(run.exp.magnitude())?;
            let reps = run.exp.magnitude().to_u64().ok_or(BudgetExceeded {
                kind: BudgetKind::Steps,
            })?;
            let positive = run.exp.is_positive();
            for _ in 0..reps {
                // x_i = a_i t, so x_i^-1 = t^-1 a_i^-1
                if positive {
                    let img = self.theta.expand_letter_gas(run.index, -r, true, gas)?;
                    push_reduced(&mut v, img.letters().iter().copied());
                    r += 1;
                } else {
                    r -= 1;
                    let img = self.theta.expand_letter_gas(run.index, -r, false, gas)?;
                    push_reduced(&mut v, img.letters().iter().copied());
                }
            }
        }
        Ok(NormalForm::new(FreeWord::from_letters(v), r))
    }
}

/// One-shot [`Collector::collect`].
pub fn collect(u: &GWord, budget: &EvalBudget) -> Result<NormalForm, BudgetExceeded> {
    Collector::new().collect(u, budget)
}

/// One-shot [`Collector::multiply`].
pub fn nf_multiply(
    g1: &NormalForm,
    g2: &NormalForm,
    budget: &EvalBudget,
) -> Result<NormalForm, BudgetExceeded> {
    Collector::new().multiply(g1, g2, budget)
}

/// One-shot [`Collector::invert`].
pub fn nf_invert(g: &NormalForm, budget: &EvalBudget) -> Result<NormalForm, BudgetExceeded> {
    Collector::new().invert(g, budget)
}

/// One-shot [`Collector::eval_hword`].
pub fn eval_hword(h: &HWord, budget: &EvalBudget) -> Result<NormalForm, BudgetExceeded> {
    Collector::new().eval_hword(h, budget)
}

/// Expand an `HWord` into the corresponding `GWord` (each `x_i` as `a_i t`).
/// Exponent magnitudes must fit in memory.
pub fn hword_to_gword(h: &HWord) -> Option<GWord> {
    let mut letters = Vec::new();
    for run in h.runs() {
        let reps = run.exp.magnitude().to_usize()?;
        let positive = run.exp.is_positive();
        for _ in 0..reps {
            if positive {
                letters.push(GLetter::A(Letter::positive(run.index)));
                letters.push(GLetter::T(true));
            } else {
                letters.push(GLetter::T(false));
                letters.push(GLetter::A(Letter::negative(run.index)));
            }
        }
    }
    Some(GWord::from_letters(letters))
}
