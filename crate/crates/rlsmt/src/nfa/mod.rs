//! Nondeterministic automata over the padded symbol alphabet.
//!
//! Edges either consume a symbol from a range set or are zero-width;
//! both kinds may carry a [`BoundaryPred`] guard over the two symbols
//! around the current gap.  Automata are built from regexes, extended
//! with explicit start/end padding, stripped of zero-width edges, and
//! optionally reversed before the Boolean-level encoding takes over.

mod boundary;
mod build;
mod sim;
mod transform;

pub use boundary::BoundaryPred;
pub use build::{thompson, universal};
pub use sim::nfa_accepts;
pub use transform::{eliminate_epsilons, extend_padding, reverse};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::symbols::RangeSet;

/// Index of the string variable an automaton constrains.
pub type VarId = usize;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Consume one symbol from `ranges`, subject to `guard`.
    Consume { ranges: RangeSet, guard: BoundaryPred },
    /// Advance without consuming, subject to `guard`.
    ZeroWidth { guard: BoundaryPred },
}

impl EdgeLabel {
    pub fn consume(ranges: RangeSet) -> Self {
        EdgeLabel::Consume { ranges, guard: BoundaryPred::tt() }
    }

    pub fn zero_width(guard: BoundaryPred) -> Self {
        EdgeLabel::ZeroWidth { guard }
    }
}

#[derive(Debug, Clone)]
pub struct Nfa {
    pub var: VarId,
    /// Outgoing edges per state.
    pub out: Vec<Vec<(EdgeLabel, StateId)>>,
    pub initial: BTreeSet<StateId>,
    pub accepting: BTreeSet<StateId>,
    /// Whether the automaton has been wrapped in start/end padding.
    pub extended: bool,
}

impl Nfa {
    pub fn new(var: VarId) -> Self {
        Nfa {
            var,
            out: Vec::new(),
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
            extended: false,
        }
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn add_state(&mut self) -> StateId {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_edge(&mut self, from: StateId, to: StateId, label: EdgeLabel) {
        self.out[from].push((label, to));
    }

    pub fn has_zero_width_edges(&self) -> bool {
        self.out
            .iter()
            .any(|edges| edges.iter().any(|(l, _)| matches!(l, EdgeLabel::ZeroWidth { .. })))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Human-readable listing, one edge per line, for debugging and for
    /// golden tests that pin down small automata.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let fmt_states = |set: &BTreeSet<StateId>| {
            set.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(
            s,
            "var={} states={} initial={{{}}} accepting={{{}}}{}",
            self.var,
            self.num_states(),
            fmt_states(&self.initial),
            fmt_states(&self.accepting),
            if self.extended { " extended" } else { "" },
        );
        for (from, edges) in self.out.iter().enumerate() {
            for (label, to) in edges {
                match label {
                    EdgeLabel::Consume { ranges, guard } if guard.is_true() => {
                        let _ = writeln!(s, "  {from} -> {to} : sym={ranges}");
                    }
                    EdgeLabel::Consume { ranges, guard } => {
                        let _ = writeln!(s, "  {from} -> {to} : sym={ranges} guard={guard}");
                    }
                    EdgeLabel::ZeroWidth { guard } => {
                        let _ = writeln!(s, "  {from} -> {to} : eps guard={guard}");
                    }
                }
            }
        }
        s
    }
}
