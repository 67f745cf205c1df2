//! Identity and inequality suites tying the Ackermann hierarchy to the
//! hydra durations on a moderate grid. The full acceptance grids run in the
//! CLI crate's acceptance suite; these keep the core crate self-checking.

use hydra_core::ackermann::AckEvaluator;
use hydra_core::hydra::{hydra_h, phi};
use hydra_core::{BudgetExceeded, EvalBudget};
use num_bigint::{BigInt, BigUint};
use num_traits::One;

fn budget() -> EvalBudget {
    EvalBudget::default()
}

/// Evaluate, treating a budget trip as "out of grid".
fn ack(e: &mut AckEvaluator, k: u32, n: &BigUint) -> Option<BigUint> {
    e.ack(k, n, &budget()).ok()
}

fn ack_u(e: &mut AckEvaluator, k: u32, n: u64) -> Option<BigUint> {
    ack(e, k, &BigUint::from(n))
}

#[test]
fn ackermann_relation_suite() {
    let mut e = AckEvaluator::new();
    let b = budget();
    let max = 4u64;
    for k in 0..=3u32 {
        for n in 0..=max {
            // A_k(A_{k+1}(n)) = A_{k+1}(n+1)
            if let Some(inner) = ack_u(&mut e, k + 1, n) {
                if let (Some(lhs), Some(rhs)) =
                    (ack(&mut e, k, &inner), ack_u(&mut e, k + 1, n + 1))
                {
                    assert_eq!(lhs, rhs, "composition at k={k} n={n}");
                }
            }
        }
    }
    for k in 0..=4u32 {
        if k >= 1 {
            assert_eq!(
                ack_u(&mut e, k, 1).unwrap(),
                BigUint::from(2u32),
                "A_{k}(1)"
            );
        }
        assert_eq!(
            ack_u(&mut e, k, 2).unwrap(),
            BigUint::from(4u32),
            "A_{k}(2)"
        );
        for n in 0..=max {
            let here = ack_u(&mut e, k, n);
            let next_n = ack_u(&mut e, k, n + 1);
            if let (Some(a), Some(b2)) = (&here, &next_n) {
                assert!(a < b2, "strict growth in n at k={k} n={n}");
            }
            if k >= 1 {
                if let (Some(a), Some(b2)) = (&here, &ack_u(&mut e, k + 1, n)) {
                    assert!(a <= b2, "growth in k at k={k} n={n}");
                }
            }
            if let Some(a) = &here {
                let n_big = BigUint::from(n);
                assert!(n_big <= *a, "A_k(n) >= n at k={k} n={n}");
                if *a == n_big {
                    assert_eq!((k, n), (1, 0), "equality only at (1, 0)");
                }
            }
        }
    }
    let _ = b;
}

#[test]
fn ackermann_superadditivity_suite() {
    let mut e = AckEvaluator::new();
    let b = budget();
    let max = 4u64;
    for k in 1..=3u32 {
        for n in 0..=max {
            for m in 0..=max {
                // m A_k(n) <= A_k(nm) for n >= 1
                if n >= 1 {
                    if let (Some(a), Some(prod)) = (ack_u(&mut e, k, n), ack_u(&mut e, k, n * m)) {
                        assert!(a * m <= prod, "m A_k(n) <= A_k(nm) at k={k} n={n} m={m}");
                    }
                }
                // A_k(n) + A_k(m) <= A_k(n + m) for n, m >= 1
                if n >= 1 && m >= 1 {
                    if let (Some(a), Some(c), Some(sum)) = (
                        ack_u(&mut e, k, n),
                        ack_u(&mut e, k, m),
                        ack_u(&mut e, k, n + m),
                    ) {
                        assert!(a + c <= sum, "superadditive at k={k} n={n} m={m}");
                    }
                }
                // A_k(n) + m <= A_k(n + m)
                if let (Some(a), Some(sum)) = (ack_u(&mut e, k, n), ack_u(&mut e, k, n + m)) {
                    assert!(a + m <= sum, "translation at k={k} n={n} m={m}");
                }
                // (A_k(n))^m <= A_k(nm) for k >= 2
                if k >= 2 {
                    if let (Some(a), Some(prod)) = (ack_u(&mut e, k, n), ack_u(&mut e, k, n * m)) {
                        if a.bits().saturating_mul(m) <= 4096 {
                            assert!(a.pow(m as u32) <= prod, "power law at k={k} n={n} m={m}");
                        }
                    }
                }
                // m A_k^(l)(n) <= A_k^(l+m)(n)
                for l in 0..=3u64 {
                    let lhs = e.ack_iter(k, l, &BigUint::from(n), &b).ok();
                    let rhs = e.ack_iter(k, l + m, &BigUint::from(n), &b).ok();
                    if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                        assert!(lhs * m <= rhs, "iterate law at k={k} l={l} m={m} n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn hydra_dominates_ackermann() {
    // H_k(n) >= A_k(n) for k >= 3, n >= 2, on the desk-scale points
    let mut e = AckEvaluator::new();
    let b = budget();
    for (k, n) in [(3u32, 2u64), (3, 3), (3, 4), (4, 2)] {
        let h = hydra_h(k, n, &b).unwrap();
        let a = e.ack(k, &BigUint::from(n), &b).unwrap();
        assert!(h >= a, "H_{k}({n}) < A_{k}({n})");
    }
}

#[test]
fn hydra_within_shifted_ackermann() {
    // H_k(n) <= A_k(n + k) wherever both sides evaluate
    let mut e = AckEvaluator::new();
    let b = budget();
    for k in 1..=3u32 {
        for n in 0..=6u64 {
            let (h, a) = match (
                hydra_h(k, n, &b),
                e.ack(k, &BigUint::from(n + u64::from(k)), &b),
            ) {
                (Ok(h), Ok(a)) => (h, a),
                _ => continue,
            };
            assert!(h <= a, "H_{k}({n}) > A_{k}({n}+{k})");
        }
    }
}

#[test]
fn phi_between_ackermann_levels() {
    let mut e = AckEvaluator::new();
    let b = budget();
    for k in 2..=3u32 {
        for n in 0..=6u64 {
            let p = phi(k, n as i64, &b).unwrap();
            // phi_k(n) >= A_{k-1}(n) for k >= 3
            if k >= 3 {
                if let Some(a) = ack_u(&mut e, k - 1, n) {
                    assert!(p >= BigInt::from(a), "phi_{k}({n}) too small");
                }
            }
            // phi_k(n) <= A_{k-1}(n + k) - n - k for k >= 2
            if let Some(a) = ack_u(&mut e, k - 1, n + u64::from(k)) {
                let ceiling = BigInt::from(a) - n - u64::from(k);
                assert!(p <= ceiling, "phi_{k}({n}) too large");
            }
        }
    }
}

#[test]
fn budget_trips_are_reported_not_wrong() {
    let b = budget();
    // the first out-of-budget hydra value on row 4
    let err: BudgetExceeded = hydra_h(4, 3, &b).unwrap_err();
    let again = hydra_h(4, 3, &b).unwrap_err();
    assert_eq!(err, again);
    // while the neighbouring in-budget value is exact
    assert_eq!(hydra_h(4, 2, &b).unwrap(), BigUint::from(5u32));
    assert_eq!(
        hydra_h(3, 4, &b).unwrap(),
        BigUint::from(3u32) * (BigUint::one() << 46) - 2u32
    );
}
