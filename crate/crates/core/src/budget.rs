//! Evaluation budgets.
//!
//! Most quantities in this library grow Ackermannically. Every evaluation
//! that can blow up takes an [`EvalBudget`] and reports [`BudgetExceeded`]
//! instead of allocating a tower or looping for geological time. A budget
//! trip is a deterministic outcome, never a wrong value.

use core::fmt;

use num_bigint::{BigInt, BigUint};

/// Which cap tripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    /// An integer grew beyond `max_bits` bits.
    Bits,
    /// The evaluation used more than `max_steps` recursion/rewrite steps.
    Steps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub kind: BudgetKind,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BudgetKind::Bits => write!(f, "budget exceeded: integer bit-length cap"),
            BudgetKind::Steps => write!(f, "budget exceeded: step cap"),
        }
    }
}

/// Caps on the size of produced integers and on the number of steps taken.
///
/// `max_bits` bounds the bit-length of any integer an evaluation produces;
/// the check runs before the value is stored, so a tower is never allocated.
/// `max_steps` bounds recursion unfoldings, rewrite steps, hydra strikes and
/// produced word letters, depending on the operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    max_bits: u64,
    max_steps: u64,
}

pub const DEFAULT_MAX_BITS: u64 = 1_000_000;
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

// Step counts sometimes get added to signed quantities; keeping the caps
// well under the integer limits avoids overflow checks everywhere else.
const CAP_LIMIT: u64 = 1 << 62;

impl EvalBudget {
    pub fn new(max_bits: u64, max_steps: u64) -> Self {
        EvalBudget {
            max_bits: max_bits.clamp(1, CAP_LIMIT),
            max_steps: max_steps.clamp(1, CAP_LIMIT),
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget::new(DEFAULT_MAX_BITS, DEFAULT_MAX_STEPS)
    }
}

/// Step meter for one top-level evaluation.
///
/// Created per public entry point; threaded through the recursion so that
/// shared sub-evaluations (e.g. a memoised phi inside the solver) all draw
/// from the same pool.
pub(crate) struct Gas<'a> {
    budget: &'a EvalBudget,
    used: u64,
}

impl<'a> Gas<'a> {
    pub(crate) fn new(budget: &'a EvalBudget) -> Self {
        Gas { budget, used: 0 }
    }

    pub(crate) fn budget(&self) -> &'a EvalBudget {
        self.budget
    }

    #[inline]
    pub(crate) fn step(&mut self) -> Result<(), BudgetExceeded> {
        self.spend(1)
    }

    #[inline]
    pub(crate) fn spend(&mut self, n: u64) -> Result<(), BudgetExceeded> {
        self.used = self.used.saturating_add(n);
        if self.used > self.budget.max_steps {
            Err(BudgetExceeded {
                kind: BudgetKind::Steps,
            })
        } else {
            Ok(())
        }
    }

    /// Charge for a big count, tripping immediately when it cannot fit.
    pub(crate) fn spend_big(&mut self, n: &BigUint) -> Result<(), BudgetExceeded> {
        use num_traits::ToPrimitive;
        match n.to_u64() {
            Some(n) => self.spend(n),
            None => Err(BudgetExceeded {
                kind: BudgetKind::Steps,
            }),
        }
    }

    #[inline]
    pub(crate) fn check_bits_uint(&self, x: &BigUint) -> Result<(), BudgetExceeded> {
        if x.bits() > self.budget.max_bits {
            Err(BudgetExceeded {
                kind: BudgetKind::Bits,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn check_bits_int(&self, x: &BigInt) -> Result<(), BudgetExceeded> {
        if x.magnitude().bits() > self.budget.max_bits {
            Err(BudgetExceeded {
                kind: BudgetKind::Bits,
            })
        } else {
            Ok(())
        }
    }
}
