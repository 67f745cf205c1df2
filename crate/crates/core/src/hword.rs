//! Words on the subgroup generators `x_i = a_i t`.
//!
//! The subgroup they generate is free on those letters, so the reduced form
//! of an `HWord` is a geodesic: its letter count realises the subgroup
//! distance `d_H`. Runs are kept exactly as produced (adjacent runs may
//! share an index), so battle transcripts and witnesses print in their
//! natural grouping; [`HWord::reduced`] gives the canonical coalesced form.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

/// A run `x_index^exp` with `exp != 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct XRun {
    pub index: u32,
    pub exp: BigInt,
}

/// A word on `x_1^{+-1}, x_2^{+-1}, ...`, run-length encoded.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct HWord {
    runs: Vec<XRun>,
}

impl HWord {
    pub fn empty() -> HWord {
        HWord::default()
    }

    /// A single generator `x_index^{+-1}`.
    pub fn generator(index: u32, positive: bool) -> HWord {
        HWord::from_runs([(
            index,
            if positive {
                BigInt::from(1)
            } else {
                BigInt::from(-1)
            },
        )])
    }

    /// Build from `(index, exponent)` runs, dropping zero exponents but
    /// keeping run boundaries as given. Panics on a zero index.
    pub fn from_runs<I>(runs: I) -> HWord
    where
        I: IntoIterator<Item = (u32, BigInt)>,
    {
        let mut out = Vec::new();
        for (index, exp) in runs {
            assert!(index >= 1, "x letters are indexed from 1");
            if !exp.is_zero() {
                out.push(XRun { index, exp });
            }
        }
        HWord { runs: out }
    }

    pub(crate) fn from_big_runs(runs: Vec<(u32, BigUint)>) -> HWord {
        HWord::from_runs(runs.into_iter().map(|(i, c)| (i, BigInt::from(c))))
    }

    pub fn runs(&self) -> &[XRun] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total letter count (sum of absolute exponents).
    pub fn letter_count(&self) -> BigUint {
        self.runs.iter().map(|r| r.exp.magnitude()).sum()
    }

    /// True when every exponent is positive.
    pub fn is_positive(&self) -> bool {
        self.runs.iter().all(|r| r.exp.is_positive())
    }

    /// Concatenation, keeping both words' run boundaries.
    pub fn concat(&self, other: &HWord) -> HWord {
        let mut runs = self.runs.clone();
        runs.extend_from_slice(&other.runs);
        HWord { runs }
    }

    pub fn inverse(&self) -> HWord {
        HWord {
            runs: self
                .runs
                .iter()
                .rev()
                .map(|r| XRun {
                    index: r.index,
                    exp: -&r.exp,
                })
                .collect(),
        }
    }

    /// Free reduction in the `x` letters. The result has maximal runs
    /// (adjacent runs carry distinct indices) and its letter count is the
    /// subgroup distance from the identity to the element this word spells.
    pub fn reduced(&self) -> HWord {
        let mut out: Vec<XRun> = Vec::new();
        for run in &self.runs {
            if let Some(last) = out.last_mut() {
                if last.index == run.index {
                    last.exp += &run.exp;
                    if last.exp.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            out.push(run.clone());
        }
        HWord { runs: out }
    }
}

/// Free reduction; the reduced length realises `d_H` because the subgroup
/// is free on the `x_i`.
pub fn hword_reduce(w: &HWord) -> HWord {
    w.reduced()
}

impl fmt::Display for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::parse::write_big_runs(f, self.runs.iter().map(|r| ("x", r.index, r.exp.clone())))
    }
}

impl fmt::Debug for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
