//! Independent validation of engine evidence.
//!
//! Engines can be wrong; their evidence cannot.  A claimed run is
//! replayed against the transition system semantics, a claimed
//! invariant is checked for the three defining properties (contains
//! reset, closed under the step function, excludes bad) with plain
//! SAT queries that share no code with the engine that found it.

use super::cnf::load_functional_step;
use super::sat::{Lit, SatResult, Solver};
use super::{Invariant, Trace};
use crate::ts::{unpack_var, TransitionSystem, TsKind, TsVar};

/// Replays `trace` and checks it ends in bad.
pub fn verify_trace(ts: &TransitionSystem, trace: &Trace) -> Result<(), String> {
    if trace.states.len() != trace.inputs.len() + 1 {
        return Err(format!(
            "{} states for {} inputs",
            trace.states.len(),
            trace.inputs.len()
        ));
    }
    for (i, s) in trace.states.iter().enumerate() {
        if s.len() != ts.num_latches() {
            return Err(format!("state {i} has {} latches", s.len()));
        }
    }
    for (i, inp) in trace.inputs.iter().enumerate() {
        if inp.len() != ts.num_inputs() {
            return Err(format!("step {i} has {} inputs", inp.len()));
        }
    }
    match &ts.kind {
        TsKind::Functional { resets, .. } => {
            if trace.states[0] != *resets {
                return Err("run does not start at reset".into());
            }
            for i in 0..trace.inputs.len() {
                let next = ts.simulate_step(&trace.states[i], &trace.inputs[i]);
                if next != trace.states[i + 1] {
                    return Err(format!("step {i} does not follow the step function"));
                }
            }
        }
        TsKind::Relational { init, step } => {
            let holds_init = ts.arena.eval(*init, &|v| match unpack_var(v) {
                TsVar::Latch(i) => trace.states[0][i],
                _ => unreachable!("init reads latches only"),
            });
            if !holds_init {
                return Err("first state violates the initial constraint".into());
            }
            for i in 0..trace.inputs.len() {
                let holds = ts.arena.eval(*step, &|v| match unpack_var(v) {
                    TsVar::Latch(j) => trace.states[i][j],
                    TsVar::Input(j) => trace.inputs[i][j],
                    TsVar::NextLatch(j) => trace.states[i + 1][j],
                });
                if !holds {
                    return Err(format!("step {i} violates the step relation"));
                }
            }
        }
    }
    if !ts.bad_at(trace.states.last().unwrap()) {
        return Err("run does not end in bad".into());
    }
    Ok(())
}

fn lit_for(base: Lit, value: bool) -> Lit {
    if value {
        base
    } else {
        !base
    }
}

/// Checks the three invariant properties on a functional system.
pub fn verify_invariant(ts: &TransitionSystem, inv: &Invariant) -> Result<(), String> {
    let TsKind::Functional { resets, .. } = &ts.kind else {
        return Err("invariants are only checkable on functional systems".into());
    };
    for (i, cl) in inv.clauses.iter().enumerate() {
        if cl.iter().any(|&(latch, _)| latch >= ts.num_latches()) {
            return Err(format!("clause {i} names an unknown latch"));
        }
    }
    if !inv.holds_at(resets) {
        return Err("invariant does not contain the reset state".into());
    }

    let mut solver = Solver::new();
    let step = load_functional_step(ts, &mut solver);
    for cl in &inv.clauses {
        let lits: Vec<Lit> =
            cl.iter().map(|&(latch, v)| lit_for(step.latches[latch], v)).collect();
        solver.add_clause(&lits);
    }
    // Closed: no invariant state steps outside any clause.
    for (i, cl) in inv.clauses.iter().enumerate() {
        let assumptions: Vec<Lit> =
            cl.iter().map(|&(latch, v)| lit_for(step.nexts[latch], !v)).collect();
        if solver.solve_assuming(&assumptions) == SatResult::Sat {
            return Err(format!("clause {i} is not inductive"));
        }
    }
    // Safe: no invariant state is bad.
    if solver.solve_assuming(&[step.bad]) == SatResult::Sat {
        return Err("invariant admits a bad state".into());
    }
    Ok(())
}
