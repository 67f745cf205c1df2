//! Exact, budgeted evaluation of the Ackermann hierarchy
//!
//! ```text
//! A_0(n) = n + 2,   A_1(0) = 0,   A_k(0) = 1 (k >= 2),
//! A_{k+1}(n+1) = A_k(A_{k+1}(n)),
//! ```
//!
//! so `A_1(n) = 2n`, `A_2(n) = 2^n` and `A_3(n)` is the `n`-fold iterated
//! power of 2. Levels 0..=2 use those closed forms; level 3 is evaluated as
//! an iterated power tower with a bit-length check before each squaring, so
//! a budget trip happens before a tower is ever allocated; higher levels use
//! the memoised recursion.

use alloc::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::budget::{BudgetExceeded, BudgetKind, EvalBudget, Gas};

/// Memoising evaluator. The memo holds only exact values, so results do not
/// depend on what was evaluated before.
#[derive(Default)]
pub struct AckEvaluator {
    memo: BTreeMap<(u32, BigUint), BigUint>,
}

impl AckEvaluator {
    pub fn new() -> Self {
        AckEvaluator::default()
    }

    /// `A_k(n)`.
    pub fn ack(
        &mut self,
        k: u32,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.ack_gas(k, n, &mut gas)
    }

    /// The `l`-fold iterate `A_k^{(l)}(n)`.
    pub fn ack_iter(
        &mut self,
        k: u32,
        l: u64,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        let mut v = n.clone();
        for _ in 0..l {
            gas.step()?;
            v = self.ack_gas(k, &v, &mut gas)?;
        }
        Ok(v)
    }

    pub(crate) fn ack_gas(
        &mut self,
        k: u32,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        gas.step()?;
        match k {
            0 => {
                let v = n + 2u32;
                gas.check_bits_uint(&v)?;
                Ok(v)
            }
            1 => {
                let v = n << 1;
                gas.check_bits_uint(&v)?;
                Ok(v)
            }
            2 => {
                // 2^n has n + 1 bits
                let shift =
                    n.to_u64()
                        .filter(|s| *s < gas.budget().max_bits())
                        .ok_or(BudgetExceeded {
                            kind: BudgetKind::Bits,
                        })?;
                Ok(BigUint::one() << shift)
            }
            3 => self.tower(n, gas),
            _ => {
                if let Some(v) = self.memo.get(&(k, n.clone())) {
                    return Ok(v.clone());
                }
                if n.is_zero() {
                    return Ok(BigUint::one());
                }
                // unfold A_k(i) = A_{k-1}(A_k(i-1)) iteratively from i = 0
                let mut i = BigUint::zero();
                let mut v = BigUint::one();
                while &i < n {
                    gas.step()?;
                    v = self.ack_gas(k - 1, &v, gas)?;
                    i += 1u32;
                    self.memo.insert((k, i.clone()), v.clone());
                }
                Ok(v)
            }
        }
    }

    /// `A_3(n)`: the n-fold iterated power of 2, one squaring step at a time.
    fn tower(&mut self, n: &BigUint, gas: &mut Gas<'_>) -> Result<BigUint, BudgetExceeded> {
        let mut i = BigUint::zero();
        let mut x = BigUint::one();
        while &i < n {
            gas.step()?;
            // 2^x has x + 1 bits; refuse before allocating
            let shift =
                x.to_u64()
                    .filter(|s| *s < gas.budget().max_bits())
                    .ok_or(BudgetExceeded {
                        kind: BudgetKind::Bits,
                    })?;
            x = BigUint::one() << shift;
            i += 1u32;
        }
        Ok(x)
    }
}

/// One-shot `A_k(n)`.
pub fn ack(k: u32, n: u64, budget: &EvalBudget) -> Result<BigUint, BudgetExceeded> {
    AckEvaluator::new().ack(k, &BigUint::from(n), budget)
}

/// One-shot `A_k^{(l)}(n)`.
pub fn ack_iter(k: u32, l: u64, n: u64, budget: &EvalBudget) -> Result<BigUint, BudgetExceeded> {
    AckEvaluator::new().ack_iter(k, l, &BigUint::from(n), budget)
}
