//! Solver against the exhaustive ball oracle on quick grids; the full
//! acceptance grids run in the CLI crate.

use hydra_core::distortion::scan_hball;
use hydra_core::solver::{solve, CosetAnswer, CosetQuery, SolverBudget};
use hydra_core::theta::ThetaExpander;
use hydra_core::{EvalBudget, FreeWord, Letter};
use num_bigint::BigUint;

fn reduced_words(k: u32, max_len: usize) -> Vec<FreeWord> {
    let mut alphabet = Vec::new();
    for i in 1..=k {
        alphabet.push(Letter::positive(i));
        alphabet.push(Letter::negative(i));
    }
    let mut out = vec![FreeWord::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for &l in &alphabet {
                if prefix.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut word = prefix.clone();
                word.push(l);
                out.push(FreeWord::from_letters(word.iter().copied()));
                next.push(word);
            }
        }
        layer = next;
    }
    out
}

/// Compare every solver verdict on the `(r, w)` grid against one ball scan
/// of the given radius. Returns (queries, members confirmed).
fn compare(k: u32, radius: u32, max_wlen: usize, max_r: i64) -> (u64, u64) {
    let budget = EvalBudget::default();
    let solver_budget = SolverBudget::default();
    let words = reduced_words(k, max_wlen);

    // one target per distinct theta^-r(w)
    let mut expander = ThetaExpander::new();
    let mut targets: Vec<FreeWord> = Vec::new();
    let mut target_of: Vec<Vec<usize>> = Vec::new(); // [word][r_offset]
    for w in &words {
        let mut per_r = Vec::new();
        for r in -max_r..=max_r {
            let v = expander.apply(w, -r, &budget).unwrap();
            let idx = match targets.iter().position(|t| *t == v) {
                Some(i) => i,
                None => {
                    targets.push(v);
                    targets.len() - 1
                }
            };
            per_r.push(idx);
        }
        target_of.push(per_r);
    }

    let hits = scan_hball(k, radius, &targets);
    let mut queries = 0;
    let mut confirmed = 0;

    for (wi, w) in words.iter().enumerate() {
        for (ri, r) in (-max_r..=max_r).enumerate() {
            queries += 1;
            let found = &hits[target_of[wi][ri]];
            assert!(found.len() <= 1, "cosets intersect: {found:?}");
            let oracle = found.first().map(|h| (r - h.t_exponent, h.length));
            let answer = solve(&CosetQuery { r, w: w.clone() }, &solver_budget);
            match (oracle, answer) {
                (Some((s, len)), CosetAnswer::Member { s: got, sigma }) => {
                    assert_eq!(s, got, "exponent mismatch on t^{r} {w}");
                    assert_eq!(
                        sigma.reduced().letter_count(),
                        BigUint::from(len),
                        "geodesic length mismatch on t^{r} {w}"
                    );
                    confirmed += 1;
                }
                (Some((s, _)), other) => {
                    panic!("oracle found t^{r} {w} in H t^{s} but solver said {other:?}")
                }
                (None, CosetAnswer::Member { s, sigma }) => {
                    // only consistent when the witness outgrows the ball
                    let len = sigma.reduced().letter_count();
                    assert!(
                        len > BigUint::from(u64::from(radius)),
                        "solver witness for t^{r} {w} (s={s}, length {len}) missed by the oracle"
                    );
                }
                (None, _) => {}
            }
        }
    }
    (queries, confirmed)
}

#[test]
fn rank_two_grid_against_radius_twelve_ball() {
    let (queries, confirmed) = compare(2, 12, 3, 2);
    assert_eq!(queries, 265);
    // plenty of genuine members in range
    assert!(confirmed >= 150, "only {confirmed} members confirmed");
}

#[test]
fn rank_three_grid_against_radius_nine_ball() {
    let (queries, confirmed) = compare(3, 9, 2, 2);
    assert_eq!(queries, 185);
    assert!(confirmed >= 60, "only {confirmed} members confirmed");
}
