//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p hydra-cli --test acceptance` (add
//! `-- --nocapture` to see the lines as they go).

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use hydra_core::ackermann::AckEvaluator;
use hydra_core::distortion::{distortion_table, scan_hball, witness_pair, witness_u};
use hydra_core::group::eval_hword;
use hydra_core::hword::HWord;
use hydra_core::hydra::{battle, hydra_h, phi, strike, HydraWord};
use hydra_core::parse::{parse_free_word, parse_gword, parse_hydra_word};
use hydra_core::solver::{solve, theta_run_exponent, CosetAnswer, CosetQuery, SolverBudget};
use hydra_core::theta::ThetaExpander;
use hydra_core::{EvalBudget, FreeWord, Letter, NormalForm};

fn budget() -> EvalBudget {
    EvalBudget::default()
}

fn solver_budget() -> SolverBudget {
    SolverBudget::default()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn pass(n: u32, what: &str) {
    println!("acceptance {n:>2}: PASS - {what}");
}

#[test]
fn criterion_01_five_strike_battle() {
    let started = Instant::now();
    let opening = parse_hydra_word("a2 a3 a1").unwrap();

    let result = battle(&opening, &budget(), true).unwrap();
    assert_eq!(result.duration, big(5));
    assert_eq!(
        result.transcript.unwrap().letter_count(),
        big(5),
        "one transcript letter per strike"
    );

    let display = ["a3 a2 a1", "a2 a1 a1", "a1 a1", "a1", "e"];
    let mut word = opening;
    for expected in display {
        word = strike(&word).unwrap();
        assert_eq!(word, parse_hydra_word(expected).unwrap());
    }
    assert!(word.is_empty());

    assert!(started.elapsed() < Duration::from_secs(1), "too slow");
    pass(
        1,
        "battle(a2 a3 a1) lasts 5 strikes through the expected words",
    );
}

#[test]
fn criterion_02_rank_two_durations() {
    for n in 0..=16u64 {
        assert_eq!(
            hydra_h(2, n, &budget()).unwrap(),
            (BigUint::one() << n) - 1u32,
            "H_2({n})"
        );
    }
    for n in 0..=12u64 {
        let fought = battle(&HydraWord::power(2, n), &budget(), false).unwrap();
        assert_eq!(
            fought.duration,
            hydra_h(2, n, &budget()).unwrap(),
            "battle a_2^{n}"
        );
    }
    pass(2, "H_2(n) = 2^n - 1 for n <= 16, battles agree for n <= 12");
}

#[test]
fn criterion_03_rank_three_values() {
    let started = Instant::now();
    assert_eq!(hydra_h(3, 3, &budget()).unwrap(), big(46));
    assert_eq!(
        hydra_h(3, 4, &budget()).unwrap(),
        BigUint::from(3u32) * (BigUint::one() << 46) - 2u32
    );
    assert_eq!(
        battle(&HydraWord::power(3, 3), &budget(), false)
            .unwrap()
            .duration,
        big(46)
    );
    assert!(started.elapsed() < Duration::from_secs(10), "too slow");
    pass(
        3,
        "H_3(3) = 46 and H_3(4) = 3*2^46 - 2, by recursion and by battle",
    );
}

#[test]
fn criterion_04_easy_rows() {
    for k in 1..=6u32 {
        assert_eq!(
            hydra_h(k, 2, &budget()).unwrap(),
            big(u64::from(k) + 1),
            "H_{k}(2)"
        );
    }
    for n in 0..=100u64 {
        assert_eq!(hydra_h(1, n, &budget()).unwrap(), big(n), "H_1({n})");
    }
    pass(4, "H_k(2) = k + 1 for k <= 6 and H_1(n) = n for n <= 100");
}

#[test]
fn criterion_05_phi_row_three() {
    let b = budget();
    for n in 0..=14i64 {
        let closed = BigInt::from(3) * (BigInt::one() << n) - n - 2;
        assert_eq!(phi(3, n, &b).unwrap(), closed, "phi_3({n}) by recursion");
    }
    let mut expander = ThetaExpander::new();
    for n in 0..=10i64 {
        let w = expander.expand_letter(3, n, true, &b).unwrap();
        let fought = battle(&HydraWord::from_positive(&w).unwrap(), &b, false).unwrap();
        assert_eq!(
            BigInt::from(fought.duration),
            phi(3, n, &b).unwrap(),
            "phi_3({n}) by battle"
        );
    }
    pass(
        5,
        "phi_3(n) = 3*2^n - n - 2 for n <= 14, battles agree for n <= 10",
    );
}

#[test]
fn criterion_06_ackermann_relation_suite() {
    let started = Instant::now();
    let b = budget();
    let mut e = AckEvaluator::new();
    let mut ack = |k: u32, n: &BigUint| e.ack(k, n, &b).ok();
    let grid = 6u64;
    let mut checks = 0u64;

    // A_k(A_{k+1}(n)) = A_{k+1}(n+1)
    for k in 0..=4u32 {
        for n in 0..=grid {
            if let Some(inner) = ack(k + 1, &big(n)) {
                if let (Some(lhs), Some(rhs)) = (ack(k, &inner), ack(k + 1, &big(n + 1))) {
                    assert_eq!(lhs, rhs, "composition k={k} n={n}");
                    checks += 1;
                }
            }
        }
    }
    // A_k(1) = 2 (k >= 1) and A_k(2) = 4
    for k in 0..=4u32 {
        if k >= 1 {
            assert_eq!(ack(k, &big(1)).unwrap(), big(2));
        }
        assert_eq!(ack(k, &big(2)).unwrap(), big(4));
        checks += 2;
    }
    for k in 0..=4u32 {
        for n in 0..=grid {
            let here = ack(k, &big(n));
            // strict growth in n
            if let (Some(a), Some(b2)) = (&here, &ack(k, &big(n + 1))) {
                assert!(a < b2, "A_{k} not strict at {n}");
                checks += 1;
            }
            // monotone in k from k = 1 up
            if k >= 1 {
                if let (Some(a), Some(b2)) = (&here, &ack(k + 1, &big(n))) {
                    assert!(a <= b2, "A_{k}({n}) > A_{}({n})", k + 1);
                    checks += 1;
                }
            }
            // n <= A_k(n), equality exactly at (1, 0)
            if let Some(a) = &here {
                assert!(big(n) <= *a);
                if big(n) == *a {
                    assert_eq!((k, n), (1, 0), "unexpected equality");
                }
                checks += 1;
            }
        }
    }
    for k in 1..=4u32 {
        for n in 0..=grid {
            for m in 0..=grid {
                if n >= 1 {
                    if let (Some(a), Some(p)) = (ack(k, &big(n)), ack(k, &big(n * m))) {
                        assert!(a * m <= p, "m A_k(n) <= A_k(nm) k={k} n={n} m={m}");
                        checks += 1;
                    }
                }
                if n >= 1 && m >= 1 {
                    if let (Some(a), Some(c), Some(s)) =
                        (ack(k, &big(n)), ack(k, &big(m)), ack(k, &big(n + m)))
                    {
                        assert!(a + c <= s, "superadditivity k={k} n={n} m={m}");
                        checks += 1;
                    }
                }
                if let (Some(a), Some(s)) = (ack(k, &big(n)), ack(k, &big(n + m))) {
                    assert!(a + m <= s, "translation k={k} n={n} m={m}");
                    checks += 1;
                }
                if k >= 2 {
                    if let (Some(a), Some(p)) = (ack(k, &big(n)), ack(k, &big(n * m))) {
                        if a.bits().saturating_mul(m) <= 1 << 20 {
                            assert!(a.pow(m as u32) <= p, "power law k={k} n={n} m={m}");
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    // m A_k^(l)(n) <= A_k^(l+m)(n)
    let mut e2 = AckEvaluator::new();
    for k in 1..=4u32 {
        for l in 0..=grid {
            for m in 0..=grid {
                for n in 0..=grid {
                    let lhs = e2.ack_iter(k, l, &big(n), &b).ok();
                    let rhs = e2.ack_iter(k, l + m, &big(n), &b).ok();
                    if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                        assert!(lhs * m <= rhs, "iterates k={k} l={l} m={m} n={n}");
                        checks += 1;
                    }
                }
            }
        }
    }
    // translation at k = 0 as well
    for n in 0..=grid {
        for m in 0..=grid {
            let (a, s) = (ack(0, &big(n)).unwrap(), ack(0, &big(n + m)).unwrap());
            assert!(a + m <= s);
            checks += 1;
        }
    }

    assert!(checks > 1000, "suite too thin: {checks} checks");
    assert!(started.elapsed() < Duration::from_secs(60), "too slow");
    pass(6, "full Ackermann relation suite, zero violations");
}

#[test]
fn criterion_07_duration_vs_ackermann() {
    let b = budget();
    let mut e = AckEvaluator::new();
    // H_k(n) >= A_k(n) on the stated points
    for (k, n) in [(3u32, 2u64), (3, 3), (3, 4), (4, 2)] {
        let h = hydra_h(k, n, &b).unwrap();
        let a = e.ack(k, &big(n), &b).unwrap();
        assert!(h >= a, "H_{k}({n}) < A_{k}({n})");
    }
    // H_k(n) <= A_k(n+k) and the phi bounds on the in-budget grid
    for k in 1..=3u32 {
        for n in 0..=6u64 {
            if let (Ok(h), Ok(a)) = (hydra_h(k, n, &b), e.ack(k, &big(n + u64::from(k)), &b)) {
                assert!(h <= a, "H_{k}({n}) > A_{k}(n+k)");
            }
            if k >= 2 {
                if let (Ok(p), Ok(a)) = (
                    phi(k, n as i64, &b),
                    e.ack(k - 1, &big(n + u64::from(k)), &b),
                ) {
                    let ceiling = BigInt::from(a) - n - u64::from(k);
                    assert!(p <= ceiling, "phi_{k}({n}) above its ceiling");
                }
            }
            if k >= 3 {
                if let (Ok(p), Ok(a)) = (phi(k, n as i64, &b), e.ack(k - 1, &big(n), &b)) {
                    assert!(p >= BigInt::from(a), "phi_{k}({n}) below A_(k-1)(n)");
                }
            }
        }
    }
    pass(
        7,
        "duration functions sit between the stated Ackermann bounds",
    );
}

#[test]
fn criterion_08_solver_matches_closed_forms() {
    let started = Instant::now();
    let b = budget();
    let sb = solver_budget();
    let mut expander = ThetaExpander::new();
    let mut disagreements = 0u32;

    // carrying t^r through theta^i(a_2^{+-1})
    for r in -6..=6i64 {
        for i in -6..=6i64 {
            let w = expander.expand_letter(2, i, true, &b).unwrap();
            match solve(&CosetQuery { r, w }, &sb) {
                CosetAnswer::Member { s, .. } if s == 2 * r - i - 1 => {}
                other => {
                    eprintln!("t^{r} theta^{i}(a_2): {other:?}");
                    disagreements += 1;
                }
            }

            let w = expander.expand_letter(2, i, false, &b).unwrap();
            let answer = solve(&CosetQuery { r, w }, &sb);
            if (r + i).rem_euclid(2) == 1 {
                match answer {
                    CosetAnswer::Member { s, .. } if s == (r + i + 1) / 2 => {}
                    other => {
                        eprintln!("t^{r} theta^{i}(a_2^-1): {other:?}");
                        disagreements += 1;
                    }
                }
            } else if answer != CosetAnswer::NotInLambda {
                eprintln!("t^{r} theta^{i}(a_2^-1): expected refutation, got {answer:?}");
                disagreements += 1;
            }
        }
    }

    // carrying t^r through theta^a(a_3^-1) theta^b(a_3)
    for a in -4..=4i64 {
        for bb in -4..=4i64 {
            for r in -4..=6i64 {
                let w = expander
                    .expand_letter(3, a, false, &b)
                    .unwrap()
                    .concat(&expander.expand_letter(3, bb, true, &b).unwrap());
                let answer = solve(&CosetQuery { r, w }, &sb);
                match theta_run_exponent(r, a, bb, &b).unwrap() {
                    Some(s) => match answer {
                        CosetAnswer::Member { s: got, .. } if BigInt::from(got) == s => {}
                        other => {
                            eprintln!("run a={a} b={bb} r={r}: expected s={s}, got {other:?}");
                            disagreements += 1;
                        }
                    },
                    None => {
                        if answer != CosetAnswer::NotInLambda {
                            eprintln!(
                                "run a={a} b={bb} r={r}: expected refutation, got {answer:?}"
                            );
                            disagreements += 1;
                        }
                    }
                }
            }
        }
    }

    assert_eq!(disagreements, 0);
    assert!(started.elapsed() < Duration::from_secs(60), "too slow");
    pass(
        8,
        "solver agrees with both closed-form coset laws, parity failures included",
    );
}

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

/// Solver against the ball oracle: every oracle member must be matched
/// exactly, and every solver member the oracle can see must be seen.
fn solver_oracle_grid(k: u32, radius: u32, max_wlen: usize, max_r: i64) -> (u64, u64) {
    let b = budget();
    let sb = solver_budget();
    let words = reduced_words(k, max_wlen);

    let mut expander = ThetaExpander::new();
    let mut targets: Vec<FreeWord> = Vec::new();
    let mut index_of: std::collections::BTreeMap<FreeWord, usize> = Default::default();
    let mut target_of: Vec<Vec<usize>> = Vec::new();
    for w in &words {
        let mut per_r = Vec::new();
        for r in -max_r..=max_r {
            let v = expander.apply(w, -r, &b).unwrap();
            let next = targets.len();
            let idx = *index_of.entry(v.clone()).or_insert(next);
            if idx == next {
                targets.push(v);
            }
            per_r.push(idx);
        }
        target_of.push(per_r);
    }

    let hits = scan_hball(k, radius, &targets);

    let mut queries = 0u64;
    let mut confirmed = 0u64;
    for (wi, w) in words.iter().enumerate() {
        for (ri, r) in (-max_r..=max_r).enumerate() {
            queries += 1;
            let found = &hits[target_of[wi][ri]];
            assert!(found.len() <= 1, "cosets intersect at {found:?}");
            let oracle = found.first().map(|h| (r - h.t_exponent, h.length));
            match (oracle, solve(&CosetQuery { r, w: w.clone() }, &sb)) {
                (Some((s, len)), CosetAnswer::Member { s: got, sigma }) => {
                    assert_eq!(s, got, "t^{r} {w}: oracle s={s}, solver s={got}");
                    assert_eq!(
                        sigma.reduced().letter_count(),
                        BigUint::from(len),
                        "t^{r} {w}: witness is not geodesic"
                    );
                    confirmed += 1;
                }
                (Some((s, _)), other) => {
                    panic!("t^{r} {w}: oracle s={s} but solver answered {other:?}")
                }
                (None, CosetAnswer::Member { s, sigma }) => {
                    let len = sigma.reduced().letter_count();
                    assert!(
                        len > BigUint::from(u64::from(radius)),
                        "t^{r} {w}: solver s={s} witness (length {len}) within oracle range was missed"
                    );
                }
                (None, _) => {}
            }
        }
    }
    (queries, confirmed)
}

#[test]
fn criterion_09_solver_matches_oracle() {
    let (q2, c2) = solver_oracle_grid(2, 18, 4, 3);
    assert_eq!(q2, 161 * 7);
    let (q3, c3) = solver_oracle_grid(3, 12, 4, 3);
    assert_eq!(q3, 937 * 7);
    assert!(c2 >= 500 && c3 >= 500, "grids too thin: {c2}, {c3}");
    pass(
        9,
        "solver and exhaustive oracle agree on every verdict and exponent",
    );
}

#[test]
fn criterion_10_witness_words() {
    let b = budget();
    for n in 1..=12u64 {
        let u = witness_u(2, n, &b).unwrap();
        let expected_len = (BigUint::one() << n) - 1u32;
        assert_eq!(u.letter_count(), expected_len.clone(), "u_(2,{n}) length");
        let nf = eval_hword(&u, &b).unwrap();
        assert_eq!(nf.v, parse_free_word(&format!("a2^{n}")).unwrap());
        assert_eq!(
            BigUint::from(nf.r as u64),
            expected_len,
            "u_(2,{n}) exponent"
        );
    }

    for (k, ns) in [(2u32, 1..=10u64), (3u32, 1..=3u64)] {
        for n in ns {
            let p = witness_pair(k, n, &b).unwrap();
            assert!(p.verified, "pair ({k},{n}) failed verification");
            assert_eq!(p.v.len() as u64, 2 * n + 4, "ambient length ({k},{n})");
            let h = hydra_h(k, n, &b).unwrap();
            assert_eq!(
                p.w.reduced().letter_count(),
                h * 2u32 + 3u32,
                "subgroup length ({k},{n})"
            );
        }
    }

    // the (2,4) instance byte for byte
    let u = witness_u(2, 4, &b).unwrap();
    assert_eq!(u.to_string(), "x2 x2 x1 x2 x1^3 x2 x1^7");
    let p = witness_pair(2, 4, &b).unwrap();
    assert_eq!(p.v, parse_gword("a2^4 a2 t a1 a2^-1 a2^-4").unwrap());
    assert_eq!(
        p.w.to_string(),
        "x2 x2 x1 x2 x1^3 x2 x1^7 x2 x1 x2^-1 x1^-7 x2^-1 x1^-3 x2^-1 x1^-1 x2^-1 x2^-1"
    );
    pass(
        10,
        "witness words have their exact lengths and match the reference displays",
    );
}

#[test]
fn criterion_11_freeness_up_to_length_eight() {
    let started = Instant::now();
    let b = budget();
    let mut seen: std::collections::BTreeMap<NormalForm, Vec<(u32, bool)>> = Default::default();
    let mut count = 0u64;

    let mut layer: Vec<Vec<(u32, bool)>> = vec![Vec::new()];
    for _ in 0..=8u32 {
        let mut next = Vec::new();
        for word in &layer {
            count += 1;
            let h = HWord::from_runs(word.iter().map(|&(i, pos)| {
                (
                    i,
                    if pos {
                        BigInt::from(1)
                    } else {
                        BigInt::from(-1)
                    },
                )
            }));
            let nf = eval_hword(&h, &b).unwrap();
            if let Some(previous) = seen.insert(nf.clone(), word.clone()) {
                panic!("collision: {previous:?} and {word:?} both evaluate to {nf:?}");
            }
            if nf.v.is_empty() {
                assert!(
                    nf.r == 0 && word.is_empty(),
                    "t-power {} reached by {word:?}",
                    nf.r
                );
            }
            if nf.v.is_positive() {
                assert!(
                    word.iter().all(|&(_, pos)| pos),
                    "positivity violated by {word:?}"
                );
            }
            if word.len() < 8 {
                for i in 1..=2u32 {
                    for pos in [true, false] {
                        if word.last() == Some(&(i, !pos)) {
                            continue;
                        }
                        let mut w = word.clone();
                        w.push((i, pos));
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }

    assert_eq!(count, 13121, "expected all reduced words of length <= 8");
    assert!(started.elapsed() < Duration::from_secs(300), "too slow");
    pass(
        11,
        "13121 reduced subgroup words map to 13121 distinct normal forms",
    );
}

#[test]
fn criterion_12_cli_budget_discipline() {
    let run = |args: &[&str]| {
        let started = Instant::now();
        let output = Command::new(env!("CARGO_BIN_EXE_hydra"))
            .args(args)
            .output()
            .expect("binary runs");
        (output, started.elapsed())
    };

    for args in [&["hk", "4", "3"][..], &["ack", "4", "4"][..]] {
        let (first, t1) = run(args);
        let (second, t2) = run(args);
        assert_eq!(first.status.code(), Some(3), "{args:?} exit code");
        assert_eq!(second.status.code(), Some(3));
        assert_eq!(first.stdout, second.stdout, "{args:?} deterministic stdout");
        assert_eq!(first.stderr, second.stderr, "{args:?} deterministic stderr");
        assert!(
            t1 < Duration::from_secs(1) && t2 < Duration::from_secs(1),
            "too slow"
        );
    }

    // and the JSON error channel
    let (output, _) = run(&["--json", "hk", "4", "3"]);
    assert_eq!(output.status.code(), Some(3));
    let line = String::from_utf8(output.stderr).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(parsed["status"], "budget_exceeded");
    pass(
        12,
        "hk 4 3 and ack 4 4 trip the default budget deterministically",
    );
}

#[test]
fn criterion_13_distortion_tables() {
    let table = distortion_table(1, 10, &solver_budget()).unwrap();
    for row in &table.rows {
        assert_eq!(row.dist, row.n / 2, "rank-1 distortion at {}", row.n);
    }

    let table = distortion_table(2, 8, &solver_budget()).unwrap();
    let dist: Vec<u64> = table.rows.iter().map(|r| r.dist).collect();
    assert_eq!(dist.len(), 9);
    for w in dist.windows(2) {
        assert!(w[0] <= w[1], "not monotone: {dist:?}");
    }
    assert!(dist[8] >= 9, "Dist(8) = {} < 9", dist[8]);
    // the witness pairs give lower bounds the table must dominate
    let b = budget();
    for n in 1..=2u64 {
        let lower = hydra_h(2, n, &b).unwrap().to_u64().unwrap() * 2 + 3;
        let at = (2 * n + 4) as usize;
        assert!(
            dist[at] >= lower,
            "Dist({at}) = {} below the witness lower bound {lower}",
            dist[at]
        );
    }
    pass(
        13,
        "distortion tables are exact: rank 1 is n/2, rank 2 reaches 9 by radius 8",
    );
}
