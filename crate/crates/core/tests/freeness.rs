//! The subgroup generated by the `x_i = a_i t` is free on those letters:
//! distinct reduced words must evaluate to distinct elements of `G`, only
//! the empty word reaches the identity, no pure `t`-power other than `t^0`
//! is reachable, and a reduced word whose normal form has positive `v`-part
//! is itself positive.

use std::collections::BTreeMap;

use hydra_core::group::eval_hword;
use hydra_core::hword::HWord;
use hydra_core::{EvalBudget, NormalForm};
use num_bigint::BigInt;

/// All reduced words over `x_1^{+-1}..x_k^{+-1}` of length <= max_len,
/// letter by letter.
fn reduced_hwords(k: u32, max_len: usize) -> Vec<Vec<(u32, bool)>> {
    let mut out: Vec<Vec<(u32, bool)>> = vec![Vec::new()];
    let mut layer: Vec<Vec<(u32, bool)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for i in 1..=k {
                for pos in [true, false] {
                    if prefix.last() == Some(&(i, !pos)) {
                        continue;
                    }
                    let mut word = prefix.clone();
                    word.push((i, pos));
                    out.push(word.clone());
                    next.push(word);
                }
            }
        }
        layer = next;
    }
    out
}

fn to_hword(letters: &[(u32, bool)]) -> HWord {
    HWord::from_runs(letters.iter().map(|&(i, pos)| {
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

fn check_freeness(k: u32, max_len: usize) {
    let budget = EvalBudget::default();
    let mut seen: BTreeMap<NormalForm, Vec<(u32, bool)>> = BTreeMap::new();
    for word in reduced_hwords(k, max_len) {
        let h = to_hword(&word);
        let nf = eval_hword(&h, &budget).unwrap();
        if let Some(previous) = seen.insert(nf.clone(), word.clone()) {
            panic!(
                "two reduced words name one element: {previous:?} and {word:?} both give {nf:?}"
            );
        }
        // only the empty word is trivial, and no other pure t-power occurs
        if nf.v.is_empty() {
            assert!(
                nf.r == 0 && word.is_empty(),
                "nonempty reduced word {word:?} evaluates to t^{}",
                nf.r
            );
        }
        // positive v forces a positive word
        if nf.v.is_positive() {
            assert!(
                word.iter().all(|&(_, pos)| pos),
                "positive normal form {nf:?} from non-positive word {word:?}"
            );
        }
    }
}

#[test]
fn rank_two_words_up_to_length_six() {
    check_freeness(2, 6);
}

#[test]
fn rank_three_words_up_to_length_six() {
    check_freeness(3, 6);
}
