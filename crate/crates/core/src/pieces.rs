//! Partition of a reduced word into pieces of a given rank.
//!
//! A piece of rank `k` is a reduced word `a_k^e1 pi a_k^-e2` with
//! `e1, e2 in {0, 1}` and `pi` of rank below `k`. Every reduced word splits
//! into a unique minimal concatenation of such pieces, determined by the
//! positions of its `a_k^{+-1}` letters: each `a_k` opens a piece and each
//! `a_k^-1` closes one.

use alloc::vec::Vec;
use core::fmt;

use crate::words::{FreeWord, Letter};

/// One piece `a_k^e1 pi a_k^-e2` of a partition.
#[derive(Clone, PartialEq, Eq)]
pub struct Piece {
    pub rank: u32,
    pub has_head: bool,
    pub interior: FreeWord,
    pub has_tail: bool,
}

impl Piece {
    /// The piece as a word.
    pub fn word(&self) -> FreeWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(self.interior.len() + 2);
        if self.has_head {
            letters.push(Letter::positive(self.rank));
        }
        letters.extend_from_slice(self.interior.letters());
        if self.has_tail {
            letters.push(Letter::negative(self.rank));
        }
        FreeWord::from_letters(letters)
    }

    pub fn len(&self) -> usize {
        self.interior.len() + usize::from(self.has_head) + usize::from(self.has_tail)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word())
    }
}

/// The minimal partition into pieces of rank `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiecePartition {
    pub rank: u32,
    pub pieces: Vec<Piece>,
}

impl PiecePartition {
    pub fn segments(&self) -> Vec<FreeWord> {
        self.pieces.iter().map(|p| p.word()).collect()
    }

    /// Reassemble the original word.
    pub fn word(&self) -> FreeWord {
        let mut out = FreeWord::empty();
        for p in &self.pieces {
            out = out.concat(&p.word());
        }
        out
    }

    pub fn count(&self) -> usize {
        self.pieces.len()
    }
}

/// Partition `w` into pieces of rank `k`.
///
/// Requires `k >= max(rank(w), 1)`. The scan is greedy left to right: an
/// `a_k` always starts a fresh piece and an `a_k^-1` always ends the current
/// one, which yields the minimal partition.
pub fn partition_pieces(w: &FreeWord, k: u32) -> PiecePartition {
    assert!(k >= 1, "piece rank must be at least 1");
    assert!(w.rank() <= k, "word has higher rank than the partition");

    let mut pieces: Vec<Piece> = Vec::new();
    let mut head = false;
    let mut interior: Vec<Letter> = Vec::new();
    let mut open = false;

    let close = |pieces: &mut Vec<Piece>, head: bool, interior: &mut Vec<Letter>, tail: bool| {
        pieces.push(Piece {
            rank: k,
            has_head: head,
            interior: FreeWord::from_letters(core::mem::take(interior)),
            has_tail: tail,
        });
    };

    for &l in w.letters() {
        if l.index() == k {
            if l.is_positive() {
                if open {
                    close(&mut pieces, head, &mut interior, false);
                }
                head = true;
                open = true;
            } else {
                close(&mut pieces, head, &mut interior, true);
                head = false;
                open = false;
            }
        } else {
            interior.push(l);
            open = true;
        }
    }
    if open {
        close(&mut pieces, head, &mut interior, false);
    }

    PiecePartition { rank: k, pieces }
}
