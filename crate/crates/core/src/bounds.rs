//! Recursive upper-bound calculators for coset exponents and witness
//! lengths.
//!
//! For a piece of rank `k` of length at most `l` carried past `t^r` with
//! `|r| <= n`, `kappa_bound(k, l, n)` bounds the emerging exponent and
//! `psi_bound(k, l, n)` bounds the subgroup length of what is left behind;
//! `k_bound` and `psi_total_bound` are the versions for a word of at most
//! `p` pieces. The recursions are
//!
//! ```text
//! kappa(1, l, n)    = n + 1
//! kappa(k+1, l, n)  = 2 K(k, l, l, 2 phi_{k+1}(n))
//! K(1, l, p, n)     = n + p
//! psi(1, l, n)      = 1
//! psi(k+1, l, n)    = 3 K(k, l, l, 2 phi_{k+1}(n)) + Psi(k, l, l, 2 phi_{k+1}(n))
//! Psi(k, l, p, n)   = p psi(k, l, K(k, l, p, n))
//! ```
//!
//! `K(k, l, p, n)` for `k >= 2` is implemented as `kappa(k, l, .)` iterated
//! `p` times. The sharper form takes a maximum over all length partitions
//! `l_1 + ... + l_q <= l`; since `kappa` is monotone in `l`, `p`-fold
//! iteration at full length dominates it and stays a valid upper bound while
//! being cheap to evaluate. These are over-approximations of the true least
//! integers by construction.
//!
//! `ackermann_constants(k)` returns the explicit coefficients `(D_k, E_k,
//! F_k)` for which `kappa(k, l, n) <= A_{k-1}(D_k n + D_k l)` and
//! `psi(k, l, n) <= A_{k-1}(E_k n + E_k l)` hold; they satisfy `D_1 = E_1 =
//! F_1 = 1`, and
//!
//! ```text
//! D_k = max { 2(D_{k-1} + 1) + 4 D_{k-1} k, 1 }
//! E_k = 3(2k+1) D_{k-1} + (2k+1) F_{k-1} + 4
//! F_k = (D_k + 1) E_k.
//! ```

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::budget::{BudgetExceeded, EvalBudget, Gas};
use crate::hydra::{PhiError, PhiEvaluator};

/// Evaluator carrying the shared phi memo.
#[derive(Default)]
pub struct BoundEvaluator {
    phi: PhiEvaluator,
}

impl BoundEvaluator {
    pub fn new() -> Self {
        BoundEvaluator::default()
    }

    /// Exponent bound for one piece of rank `k`.
    pub fn kappa_bound(
        &mut self,
        k: u32,
        l: u64,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.kappa_gas(k, l, n, &mut gas)
    }

    /// Exponent bound for a word of rank `k` with at most `p` pieces.
    pub fn k_bound(
        &mut self,
        k: u32,
        l: u64,
        p: u64,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.k_gas(k, l, p, n, &mut gas)
    }

    /// Witness-length bound for one piece of rank `k`.
    pub fn psi_bound(
        &mut self,
        k: u32,
        l: u64,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.psi_gas(k, l, n, &mut gas)
    }

    /// Witness-length bound for a word of rank `k` with at most `p` pieces.
    pub fn psi_total_bound(
        &mut self,
        k: u32,
        l: u64,
        p: u64,
        n: &BigUint,
        budget: &EvalBudget,
    ) -> Result<BigUint, BudgetExceeded> {
        let mut gas = Gas::new(budget);
        self.psi_total_gas(k, l, p, n, &mut gas)
    }

    fn phi_uint(
        &mut self,
        k: u32,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        match self.phi.phi_gas(k, &BigInt::from(n.clone()), gas) {
            Ok(v) => Ok(v
                .to_biguint()
                .expect("phi is positive on nonnegative arguments")),
            Err(PhiError::Budget(b)) => Err(b),
            Err(PhiError::NotInDomain) => unreachable!("nonnegative argument"),
        }
    }

    fn kappa_gas(
        &mut self,
        k: u32,
        l: u64,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        assert!(k >= 1, "rank starts at 1");
        gas.step()?;
        if k == 1 {
            let v = n + 1u32;
            gas.check_bits_uint(&v)?;
            return Ok(v);
        }
        let arg = self.phi_uint(k, n, gas)? << 1;
        let v = self.k_gas(k - 1, l, l, &arg, gas)? << 1;
        gas.check_bits_uint(&v)?;
        Ok(v)
    }

    fn k_gas(
        &mut self,
        k: u32,
        l: u64,
        p: u64,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        assert!(k >= 1, "rank starts at 1");
        gas.step()?;
        if k == 1 {
            let v = n + p;
            gas.check_bits_uint(&v)?;
            return Ok(v);
        }
        let mut v = n.clone();
        for _ in 0..p {
            v = self.kappa_gas(k, l, &v, gas)?;
        }
        Ok(v)
    }

    fn psi_gas(
        &mut self,
        k: u32,
        l: u64,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        assert!(k >= 1, "rank starts at 1");
        gas.step()?;
        if k == 1 {
            return Ok(BigUint::one());
        }
        let arg = self.phi_uint(k, n, gas)? << 1;
        let a = self.k_gas(k - 1, l, l, &arg, gas)?;
        let b = self.psi_total_gas(k - 1, l, l, &arg, gas)?;
        let v = a * 3u32 + b;
        gas.check_bits_uint(&v)?;
        Ok(v)
    }

    fn psi_total_gas(
        &mut self,
        k: u32,
        l: u64,
        p: u64,
        n: &BigUint,
        gas: &mut Gas<'_>,
    ) -> Result<BigUint, BudgetExceeded> {
        assert!(k >= 1, "rank starts at 1");
        gas.step()?;
        if p == 0 {
            return Ok(BigUint::zero());
        }
        if k == 1 {
            return Ok(BigUint::from(p));
        }
        let inner = self.k_gas(k, l, p, n, gas)?;
        let v = self.psi_gas(k, l, &inner, gas)? * p;
        gas.check_bits_uint(&v)?;
        Ok(v)
    }
}

/// The explicit Ackermann-form coefficients `(D_k, E_k, F_k)`.
pub fn ackermann_constants(k: u32) -> (BigUint, BigUint, BigUint) {
    assert!(k >= 1, "constants are indexed from 1");
    let mut d = BigUint::one();
    let mut e = BigUint::one();
    let mut f = BigUint::one();
    for j in 2..=u64::from(k) {
        let d_prev = d.clone();
        let f_prev = f.clone();
        d = ((&d_prev + 1u32) << 1) + &d_prev * (4 * j);
        if d.is_zero() {
            d = BigUint::one();
        }
        e = &d_prev * (3 * (2 * j + 1)) + f_prev * (2 * j + 1) + 4u32;
        f = (&d + 1u32) * &e;
    }
    (d, e, f)
}

/// One-shot [`BoundEvaluator::kappa_bound`].
pub fn kappa_bound(k: u32, l: u64, n: u64, budget: &EvalBudget) -> Result<BigUint, BudgetExceeded> {
    BoundEvaluator::new().kappa_bound(k, l, &BigUint::from(n), budget)
}

/// One-shot [`BoundEvaluator::k_bound`].
pub fn k_bound(
    k: u32,
    l: u64,
    p: u64,
    n: u64,
    budget: &EvalBudget,
) -> Result<BigUint, BudgetExceeded> {
    BoundEvaluator::new().k_bound(k, l, p, &BigUint::from(n), budget)
}

/// One-shot [`BoundEvaluator::psi_bound`].
pub fn psi_bound(k: u32, l: u64, n: u64, budget: &EvalBudget) -> Result<BigUint, BudgetExceeded> {
    BoundEvaluator::new().psi_bound(k, l, &BigUint::from(n), budget)
}

/// One-shot [`BoundEvaluator::psi_total_bound`].
pub fn psi_total_bound(
    k: u32,
    l: u64,
    p: u64,
    n: u64,
    budget: &EvalBudget,
) -> Result<BigUint, BudgetExceeded> {
    BoundEvaluator::new().psi_total_bound(k, l, p, &BigUint::from(n), budget)
}
