//! Explicit breadth-first reachability.
//!
//! Enumerates concrete latch states of a functional system.  The input
//! alphabet is quotiented to the per-variable class representatives the
//! encoder computed, which keeps the branching factor around the number
//! of distinct symbol predicates instead of 2^9 per variable.  Useful
//! as a baseline and as an oracle for the symbolic engines on small
//! systems; the frontier blows up quickly on larger ones, which is the
//! point of having the symbolic engines.

use std::collections::HashMap;

use super::{Certificate, CheckResult, Control, Trace};
use crate::symbols::Symbol;
use crate::ts::TransitionSystem;

/// BFS from reset; `state_limit` bounds the number of distinct states
/// explored before giving up.  Returns the result and the depth of the
/// deepest layer reached.
pub fn check(
    ts: &TransitionSystem,
    state_limit: usize,
    ctrl: &Control,
) -> (CheckResult, usize) {
    assert!(ts.is_functional(), "explicit search needs a deterministic step function");
    // The cartesian product of per-variable representatives, one input
    // vector per combination.
    let mut rep_inputs: Vec<(Vec<Symbol>, Vec<bool>)> = Vec::new();
    let mut odometer = vec![0usize; ts.num_vars];
    loop {
        let syms: Vec<Symbol> =
            odometer.iter().enumerate().map(|(v, &i)| ts.input_classes[v][i]).collect();
        rep_inputs.push((syms.clone(), ts.inputs_for_symbols(&syms)));
        let mut place = 0;
        loop {
            if place == ts.num_vars {
                break;
            }
            odometer[place] += 1;
            if odometer[place] < ts.input_classes[place].len() {
                break;
            }
            odometer[place] = 0;
            place += 1;
        }
        if place == ts.num_vars {
            break;
        }
    }

    let reset = ts.initial_latches();
    let mut ids: HashMap<Vec<bool>, usize> = HashMap::new();
    // Parent pointers for trace rebuilding: (predecessor id, inputs).
    let mut from: Vec<Option<(usize, Vec<bool>)>> = Vec::new();
    let mut depth_of: Vec<usize> = Vec::new();
    ids.insert(reset.clone(), 0);
    from.push(None);
    depth_of.push(0);
    if ts.bad_at(&reset) {
        return (
            CheckResult::Reachable(Trace { inputs: vec![], states: vec![reset] }),
            0,
        );
    }

    let mut queue: std::collections::VecDeque<(usize, Vec<bool>)> =
        std::collections::VecDeque::new();
    queue.push_back((0, reset));
    let mut max_depth = 0;
    while let Some((id, state)) = queue.pop_front() {
        if ctrl.should_stop() {
            return (CheckResult::Unknown("stopped".into()), max_depth);
        }
        let depth = depth_of[id];
        for (_, inputs) in &rep_inputs {
            let next = ts.simulate_step(&state, inputs);
            if ids.contains_key(&next) {
                continue;
            }
            let nid = ids.len();
            ids.insert(next.clone(), nid);
            from.push(Some((id, inputs.clone())));
            depth_of.push(depth + 1);
            max_depth = max_depth.max(depth + 1);
            if ts.bad_at(&next) {
                return (
                    CheckResult::Reachable(rebuild(ts, &from, nid)),
                    depth + 1,
                );
            }
            if ids.len() > state_limit {
                return (
                    CheckResult::Unknown(format!("more than {state_limit} states")),
                    max_depth,
                );
            }
            queue.push_back((nid, next));
        }
    }
    (
        CheckResult::Unreachable(Certificate::Exhausted { states: ids.len() }),
        max_depth,
    )
}

fn rebuild(
    ts: &TransitionSystem,
    from: &[Option<(usize, Vec<bool>)>],
    target: usize,
) -> Trace {
    let mut rev_inputs: Vec<Vec<bool>> = Vec::new();
    let mut at = target;
    while let Some((parent, inputs)) = &from[at] {
        rev_inputs.push(inputs.clone());
        at = *parent;
    }
    rev_inputs.reverse();
    let mut states = vec![ts.initial_latches()];
    for inp in &rev_inputs {
        let next = ts.simulate_step(states.last().unwrap(), inp);
        states.push(next);
    }
    Trace { inputs: rev_inputs, states }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{bmc, verify::verify_trace};
    use crate::regex::{parse_regex, ParseOptions};
    use crate::smt::{compile_problem, Formula, Mode, Problem};

    fn member(var: usize, pattern: &str) -> Formula {
        Formula::Member {
            var,
            regex: parse_regex(pattern, ParseOptions::default()).unwrap(),
            pattern: pattern.to_string(),
        }
    }

    fn ts_for(num_vars: usize, formula: Formula) -> TransitionSystem {
        let p = Problem {
            var_names: (0..num_vars).map(|i| format!("v{i}")).collect(),
            formula,
        };
        let bfa = compile_problem(&p, Mode::Reversed).unwrap();
        TransitionSystem::encode(&bfa)
    }

    #[test]
    fn agrees_with_bounded_search() {
        let cases = [
            (1, member(0, "a(b|c)*d")),
            (1, Formula::And(vec![
                member(0, "[ab]+"),
                Formula::Not(Box::new(member(0, ".*a.*"))),
            ])),
            (1, Formula::And(vec![member(0, "^a+$"), member(0, "^b+$")])),
            (2, Formula::And(vec![member(0, "xy"), member(1, "[pq]{2}")])),
        ];
        for (nv, formula) in cases {
            let ts = ts_for(nv, formula);
            let (re, de) = check(&ts, 200_000, &Control::unlimited());
            let (rb, db) = bmc::check(&ts, 12, &Control::unlimited());
            match (&re, &rb) {
                (CheckResult::Reachable(te), CheckResult::Reachable(tb)) => {
                    verify_trace(&ts, te).unwrap();
                    verify_trace(&ts, tb).unwrap();
                    assert_eq!(de, db, "both searches find shortest runs");
                    assert_eq!(te.len(), tb.len());
                }
                (CheckResult::Unreachable(Certificate::Exhausted { states }), _) => {
                    assert!(matches!(rb, CheckResult::Unknown(_)));
                    assert!(*states > 0);
                }
                other => panic!("disagreement: {other:?}"),
            }
        }
    }

    #[test]
    fn state_limit_reports_unknown() {
        let ts = ts_for(1, member(0, "[a-z]*q[a-z]*"));
        let (r, _) = check(&ts, 3, &Control::unlimited());
        assert!(matches!(r, CheckResult::Unknown(ref s) if s.contains("states")));
    }

    #[test]
    fn exhaustion_certificate_counts_states() {
        // A contradiction over a one-letter alphabet stays tiny.
        let ts = ts_for(1, Formula::And(vec![member(0, "^a$"), member(0, "^aa$")]));
        let (r, _) = check(&ts, 100_000, &Control::unlimited());
        let CheckResult::Unreachable(Certificate::Exhausted { states }) = r else {
            panic!("{r:?}")
        };
        assert!(states > 1 && states < 100_000, "{states}");
    }
}
