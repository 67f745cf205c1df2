//! Computational toolkit for the groups `G_k = F(a_1,...,a_k) x| Z`, where
//! the stable letter `t` acts by `a_1 -> a_1`, `a_i -> a_i a_{i-1}`, and for
//! their free rank-`k` subgroups `H_k = <a_1 t, ..., a_k t>`.
//!
//! The pieces fit together like this:
//!
//! * [`hydra`] fights regenerating-word battles and evaluates the duration
//!   functions `H_k` and `phi_k` by their recursions;
//! * [`ackermann`] evaluates the fast-growing hierarchy `A_k` those
//!   durations are measured against;
//! * [`words`], [`theta`] and [`pieces`] hold the free-group kernel:
//!   reduction, the automorphism and its closed-form powers, and the
//!   partition of a word into rank-`k` pieces;
//! * [`group`] computes free-by-cyclic normal forms `v t^r`;
//! * [`solver`] decides whether `t^r w` lies in some coset `H t^s` and
//!   returns the unique exponent with a verified witness word;
//! * [`bounds`] evaluates the recursive upper-bound functions used to
//!   calibrate search radii;
//! * [`distortion`] generates extreme witness pairs, runs the brute-force
//!   ball oracle, and measures exact subgroup distortion at desk scale.
//!
//! Everything that can grow Ackermannically is budgeted: see
//! [`budget::EvalBudget`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ackermann;
pub mod bounds;
pub mod budget;
pub mod distortion;
pub mod group;
pub mod hword;
pub mod hydra;
pub mod parse;
pub mod pieces;
pub mod solver;
pub mod theta;
pub mod words;

pub use budget::{BudgetExceeded, BudgetKind, EvalBudget};
pub use group::{GLetter, GWord, NormalForm};
pub use hword::HWord;
pub use hydra::{BattleResult, HydraWord};
pub use solver::{CosetAnswer, CosetQuery, SolverBudget};
pub use words::{FreeWord, Letter};
