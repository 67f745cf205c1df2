//! The shared word grammar.
//!
//! Words are whitespace-separated terms. A term is `a<INT>`, `t` or `x<INT>`
//! optionally followed by `^<SIGNED_INT>`; the single term `e` denotes the
//! empty word. Examples: `a2^4 t^15`, `x2 x1^-3`, `e`.
//!
//! Every `Display` implementation in this crate emits this grammar, and
//! re-parsing printed output reproduces the internal value exactly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::group::{GLetter, GWord};
use crate::hword::HWord;
use crate::hydra::HydraWord;
use crate::words::{FreeWord, Letter};

/// A malformed word, with a short reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.reason)
    }
}

fn err<T>(reason: impl fmt::Display) -> Result<T, ParseError> {
    Err(ParseError {
        reason: reason.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    A(u32, BigInt),
    T(BigInt),
    X(u32, BigInt),
}

fn parse_terms(input: &str) -> Result<Vec<Term>, ParseError> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    if tokens.is_empty() {
        return err("empty input (write `e` for the empty word)");
    }
    if tokens.contains(&"e") {
        if tokens.len() == 1 {
            return Ok(Vec::new());
        }
        return err("`e` must stand alone");
    }
    let mut terms = Vec::new();
    for tok in tokens {
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => {
                let exp: BigInt = match e.parse() {
                    Ok(v) => v,
                    Err(_) => return err(format_args!("bad exponent in `{tok}`")),
                };
                (b, exp)
            }
            None => (tok, BigInt::one()),
        };
        let term = if base == "t" {
            Term::T(exp)
        } else if let Some(rest) = base.strip_prefix('a') {
            Term::A(parse_index(rest, tok)?, exp)
        } else if let Some(rest) = base.strip_prefix('x') {
            Term::X(parse_index(rest, tok)?, exp)
        } else {
            return err(format_args!("unknown term `{tok}`"));
        };
        terms.push(term);
    }
    Ok(terms)
}

fn parse_index(digits: &str, tok: &str) -> Result<u32, ParseError> {
    match digits.parse::<u32>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => err(format_args!(
            "bad letter index in `{tok}` (need an integer >= 1)"
        )),
    }
}

/// Cap on the letters a single parsed word may materialise.
const MAX_PARSED_LETTERS: u64 = 1 << 22;

fn small_exp(exp: &BigInt, budget: &mut u64, tok_kind: &str) -> Result<i64, ParseError> {
    let mag = match exp.magnitude().to_u64() {
        Some(m) if m <= *budget => m,
        _ => return err(format_args!(
            "exponent too large to expand on `{tok_kind}` terms (cap {MAX_PARSED_LETTERS} letters)"
        )),
    };
    *budget -= mag;
    Ok(if exp.is_negative() {
        -(mag as i64)
    } else {
        mag as i64
    })
}

/// Parse a word on the `a_i` only; the result is freely reduced.
pub fn parse_free_word(input: &str) -> Result<FreeWord, ParseError> {
    let mut letters = Vec::new();
    let mut cap = MAX_PARSED_LETTERS;
    for term in parse_terms(input)? {
        match term {
            Term::A(i, exp) => {
                let e = small_exp(&exp, &mut cap, "a")?;
                push_letter_power(&mut letters, i, e);
            }
            _ => return err("only a-letters are allowed in this word"),
        }
    }
    Ok(FreeWord::from_letters(letters))
}

/// Parse a word on the `a_i` and `t`.
pub fn parse_gword(input: &str) -> Result<GWord, ParseError> {
    let mut letters = Vec::new();
    let mut cap = MAX_PARSED_LETTERS;
    for term in parse_terms(input)? {
        match term {
            Term::A(i, exp) => {
                let e = small_exp(&exp, &mut cap, "a")?;
                for _ in 0..e.unsigned_abs() {
                    letters.push(GLetter::A(Letter::new(i, e > 0)));
                }
            }
            Term::T(exp) => {
                let e = small_exp(&exp, &mut cap, "t")?;
                for _ in 0..e.unsigned_abs() {
                    letters.push(GLetter::T(e > 0));
                }
            }
            Term::X(..) => return err("x-letters are not allowed in this word"),
        }
    }
    Ok(GWord::from_letters(letters))
}

/// Parse a word on the `x_i` only. Runs are kept exactly as written.
pub fn parse_hword(input: &str) -> Result<HWord, ParseError> {
    let mut runs = Vec::new();
    for term in parse_terms(input)? {
        match term {
            Term::X(i, exp) => runs.push((i, exp)),
            _ => return err("only x-letters are allowed in this word"),
        }
    }
    Ok(HWord::from_runs(runs))
}

/// Parse a hydra (a positive word on the `a_i`), run-length encoded.
pub fn parse_hydra_word(input: &str) -> Result<HydraWord, ParseError> {
    let mut runs = Vec::new();
    for term in parse_terms(input)? {
        match term {
            Term::A(i, exp) => {
                if exp.is_negative() {
                    return err("hydra words are positive");
                }
                runs.push((i, exp.to_biguint().expect("nonnegative")));
            }
            _ => return err("hydra words use a-letters only"),
        }
    }
    Ok(HydraWord::from_runs(runs))
}

fn push_letter_power(letters: &mut Vec<Letter>, index: u32, exp: i64) {
    for _ in 0..exp.unsigned_abs() {
        letters.push(Letter::new(index, exp > 0));
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    name: &str,
    index: Option<u32>,
    exp: &BigInt,
) -> fmt::Result {
    if !*first {
        f.write_str(" ")?;
    }
    *first = false;
    match index {
        Some(i) => write!(f, "{name}{i}")?,
        None => f.write_str(name)?,
    }
    if !exp.is_one() {
        write!(f, "^{exp}")?;
    }
    Ok(())
}

/// Write letters `(index, positive)` with maximal runs coalesced.
pub(crate) fn write_letter_runs<I>(f: &mut fmt::Formatter<'_>, letters: I) -> fmt::Result
where
    I: IntoIterator<Item = (u32, bool)>,
{
    let mut first = true;
    let mut cur: Option<(u32, bool, u64)> = None;
    for (index, pos) in letters {
        match &mut cur {
            Some((i, p, n)) if *i == index && *p == pos => *n += 1,
            _ => {
                if let Some((i, p, n)) = cur.take() {
                    let exp = BigInt::from(n) * if p { 1 } else { -1 };
                    write_term(f, &mut first, "a", Some(i), &exp)?;
                }
                cur = Some((index, pos, 1));
            }
        }
    }
    if let Some((i, p, n)) = cur {
        let exp = BigInt::from(n) * if p { 1 } else { -1 };
        write_term(f, &mut first, "a", Some(i), &exp)?;
    }
    if first {
        f.write_str("e")?;
    }
    Ok(())
}

/// Write `(name, index, exponent)` runs verbatim, one term per run.
pub(crate) fn write_big_runs<'a, I>(f: &mut fmt::Formatter<'_>, runs: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a str, u32, BigInt)>,
{
    let mut first = true;
    for (name, index, exp) in runs {
        if exp.is_zero() {
            continue;
        }
        write_term(f, &mut first, name, Some(index), &exp)?;
    }
    if first {
        f.write_str("e")?;
    }
    Ok(())
}

/// Write a word on the `a_i` and `t` with maximal runs coalesced.
pub(crate) fn write_gword(f: &mut fmt::Formatter<'_>, letters: &[GLetter]) -> fmt::Result {
    #[derive(PartialEq, Clone, Copy)]
    enum Key {
        A(u32, bool),
        T(bool),
    }
    let mut first = true;
    let mut cur: Option<(Key, u64)> = None;
    let flush = |f: &mut fmt::Formatter<'_>, first: &mut bool, cur: &mut Option<(Key, u64)>| {
        if let Some((key, n)) = cur.take() {
            let (name, index, pos) = match key {
                Key::A(i, p) => ("a", Some(i), p),
                Key::T(p) => ("t", None, p),
            };
            let exp = BigInt::from(n) * if pos { 1 } else { -1 };
            write_term(f, first, name, index, &exp)
        } else {
            Ok(())
        }
    };
    for l in letters {
        let key = match l {
            GLetter::A(a) => Key::A(a.index(), a.is_positive()),
            GLetter::T(p) => Key::T(*p),
        };
        match &mut cur {
            Some((k, n)) if *k == key => *n += 1,
            _ => {
                flush(f, &mut first, &mut cur)?;
                cur = Some((key, 1));
            }
        }
    }
    flush(f, &mut first, &mut cur)?;
    if first {
        f.write_str("e")?;
    }
    Ok(())
}
