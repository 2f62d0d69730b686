//! Satisfiability of Boolean combinations of regular-language membership
//! constraints over string variables.
//!
//! A problem is a propositional formula whose atoms assert that a string
//! variable belongs to the language of a regex, e.g.
//! `x ∈ ^a(b|c)*$  ∧  ¬(x ∈ ^ab*$)`.  The solver compiles each atom to a
//! nondeterministic automaton, combines them symbolically into a single
//! automaton with a Boolean-formula transition structure, turns that into
//! a bit-level transition system, and then decides reachability of the
//! accepting states: bounded model checking finds satisfying assignments,
//! property-directed reachability proves unsatisfiability.
//!
//! The crate is organized bottom-up:
//!
//! * [`logic`] — hash-consed Boolean formula arena shared by every layer.
//! * [`symbols`] — the 9-bit symbol space (bytes plus two padding marks)
//!   and sets of symbol ranges.
//! * [`regex`] — parser, desugaring, and a reference matcher for the
//!   supported regex subset.

pub mod bench;
pub mod bfa;
pub mod format;
pub mod logic;
pub mod mc;
pub mod nfa;
pub mod regex;
pub mod smt;
pub mod solver;
pub mod symbols;
pub mod ts;
