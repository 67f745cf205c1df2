//! Letters and freely reduced words of the free group `F(a_1, a_2, ...)`.

use alloc::vec::Vec;
use core::fmt;

/// A single letter `a_i` or `a_i^-1`, encoded as a nonzero `i32` whose
/// absolute value is the index and whose sign is the exponent sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    /// Positive letter `a_index`. Panics if `index` is zero.
    pub fn positive(index: u32) -> Letter {
        assert!(
            index > 0 && index <= i32::MAX as u32,
            "letter index out of range"
        );
        Letter(index as i32)
    }

    /// Inverse letter `a_index^-1`. Panics if `index` is zero.
    pub fn negative(index: u32) -> Letter {
        assert!(
            index > 0 && index <= i32::MAX as u32,
            "letter index out of range"
        );
        Letter(-(index as i32))
    }

    pub fn new(index: u32, positive: bool) -> Letter {
        if positive {
            Letter::positive(index)
        } else {
            Letter::negative(index)
        }
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Signed encoding: `index` for `a_index`, `-index` for the inverse.
    pub fn code(self) -> i32 {
        self.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "a{}", self.index())
        } else {
            write!(f, "a{}^-1", self.index())
        }
    }
}

/// A freely reduced word on the letters `a_i^{+-1}`.
///
/// The reduction invariant (no adjacent inverse pair) is maintained by every
/// constructor, so equality of `FreeWord`s is equality in the free group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

/// Free reduction: cancel adjacent inverse pairs until none remain.
pub fn reduce<I>(letters: I) -> FreeWord
where
    I: IntoIterator<Item = Letter>,
{
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord { letters: out }
}

impl FreeWord {
    pub fn empty() -> FreeWord {
        FreeWord::default()
    }

    pub fn from_letters<I>(letters: I) -> FreeWord
    where
        I: IntoIterator<Item = Letter>,
    {
        reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The highest letter index occurring in the word; 0 for the empty word.
    pub fn rank(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    /// True when no inverse letter occurs.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.is_positive())
    }

    pub fn inverse(&self) -> FreeWord {
        // Reversing a reduced word keeps it reduced.
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced concatenation.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        push_reduced(&mut out, other.letters.iter().copied());
        FreeWord { letters: out }
    }

    /// Number of occurrences of the exact letter `l`.
    pub fn count_letter(&self, l: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == l).count()
    }

    /// The reduced `n`-th power (n may be negative).
    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }
}

/// Append letters to an already reduced buffer, cancelling at the junction.
pub(crate) fn push_reduced<I>(buf: &mut Vec<Letter>, letters: I)
where
    I: IntoIterator<Item = Letter>,
{
    for l in letters {
        if buf.last() == Some(&l.inverse()) {
            buf.pop();
        } else {
            buf.push(l);
        }
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FreeWord {
    /// Shared word grammar, with maximal runs coalesced: `a2^4 a1^-2`, or
    /// `e` for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::write_letter_runs(
            f,
            self.letters.iter().map(|l| (l.index(), l.is_positive())),
        )
    }
}
