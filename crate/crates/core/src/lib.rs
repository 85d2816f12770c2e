//! Exact state complexity of catenation combined with a binary boolean
//! operation on regular languages.
//!
//! The crate computes the deterministic state complexity of languages of the
//! form `M (N op P)`, where `M`, `N`, `P` are regular languages given by
//! complete DFAs and `op` is any of the sixteen binary boolean set
//! operations. It provides:
//!
//! * [`automata`]: complete DFAs and NFAs over small alphabets, with subset
//!   construction, minimization, catenation, boolean products and language
//!   equivalence.
//! * [`tableaux`]: the bit-matrix states of the combined construction,
//!   saturation closure, and enumeration of saturated tableaux.
//! * [`combinatorics`]: the counting side (integer partitions, Bell/Stirling
//!   style sequences, and the polynomials whose values predict state counts).
//! * [`witness`]: families of permutation-style DFAs that attain the upper
//!   bounds.
//! * [`complexity`]: the direct combined construction, predicted values, and
//!   end-to-end verification reports.
//! * [`cli`]: the `sclab` command line tool.
//!
//! All arithmetic is exact; counts use big integers where they can overflow.

pub mod automata;
pub mod cli;
pub mod combinatorics;
pub mod complexity;
pub mod tableaux;
pub mod witness;
