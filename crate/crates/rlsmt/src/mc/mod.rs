//! Reachability engines over bit-level transition systems.
//!
//! Everything funnels into one question: can the bad formula become
//! true in some number of steps from reset?  Bounded model checking
//! answers "yes" with a concrete run, inductive strengthening answers
//! "no" with an invariant, and a plain explicit-state search does both
//! for small systems and keeps the symbolic engines honest.
//!
//! Results carry checkable evidence — an input trace or an inductive
//! invariant — which [`verify`] re-validates independently of the
//! engine that produced it.

pub mod bmc;
pub mod cnf;
pub mod explicit;
pub mod ic3;
pub mod portfolio;
pub mod sat;
pub mod verify;

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

/// Cooperative stop signal shared by engines: an explicit cancel (when
/// a portfolio sibling wins) or a wall-clock deadline.  Engines poll at
/// bound/frame boundaries.
#[derive(Debug, Default)]
pub struct Control {
    cancel: AtomicBool,
    deadline: Option<Instant>,
}

impl Control {
    pub fn unlimited() -> Control {
        Control::default()
    }

    pub fn with_deadline(deadline: Instant) -> Control {
        Control { cancel: AtomicBool::new(false), deadline: Some(deadline) }
    }

    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn should_stop(&self) -> bool {
        self.cancel.load(Ordering::Relaxed)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// A concrete run of the system: `states[0]` is reset and
/// `states[i+1]` follows from `states[i]` under `inputs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub inputs: Vec<Vec<bool>>,
    pub states: Vec<Vec<bool>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// A clause over latches: literal `(latch, value)` is true in states
/// where the latch holds `value`.  A state satisfies the clause when
/// some literal does.
pub type LatchClause = Vec<(usize, bool)>;

/// An inductive invariant: contains reset, closed under stepping, and
/// excludes bad.  Conjunction of clauses.
#[derive(Debug, Clone, Default)]
pub struct Invariant {
    pub clauses: Vec<LatchClause>,
}

impl Invariant {
    pub fn holds_at(&self, state: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|&(latch, value)| state[latch] == value))
    }
}

/// Why a "no" answer is trustworthy.
#[derive(Debug, Clone)]
pub enum Certificate {
    Inductive(Invariant),
    /// The whole reachable state space was enumerated.
    Exhausted { states: usize },
}

#[derive(Debug, Clone)]
pub enum CheckResult {
    Reachable(Trace),
    Unreachable(Certificate),
    /// The engine gave up; the string says why (bound or resource
    /// limits, cancellation).
    Unknown(String),
}

impl CheckResult {
    pub fn is_reachable(&self) -> bool {
        matches!(self, CheckResult::Reachable(_))
    }

    pub fn is_unreachable(&self) -> bool {
        matches!(self, CheckResult::Unreachable(_))
    }
}
