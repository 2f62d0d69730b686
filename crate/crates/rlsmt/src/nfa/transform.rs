//! Automaton transformations: start/end padding, zero-width-edge
//! elimination, and reversal.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{BoundaryPred, EdgeLabel, Nfa, StateId};
use crate::symbols::{RangeSet, SIGMA_END, SIGMA_START};

/// Wraps an automaton so it reads padded words `start^i w end^j` with
/// `i, j >= 1` instead of raw words `w`.  A fresh pre-initial state
/// loops on the start mark and hands over to the old initial states on
/// the final start mark; old accepting states consume an end mark into a
/// fresh sink that loops on further end marks.
///
/// The fresh states have no zero-width edges, which is what makes the
/// subsequent elimination exact: every guard ends up fused into a
/// consuming edge, so no guard is ever evaluated at the very first or
/// very last gap of a run.
pub fn extend_padding(nfa: &Nfa) -> Nfa {
    assert!(!nfa.extended, "automaton is already extended");
    let mut out = nfa.clone();
    let pre = out.add_state();
    let sink = out.add_state();
    let start = RangeSet::singleton(SIGMA_START);
    let end = RangeSet::singleton(SIGMA_END);
    out.add_edge(pre, pre, EdgeLabel::consume(start.clone()));
    for &q in &nfa.initial {
        out.add_edge(pre, q, EdgeLabel::consume(start.clone()));
    }
    for &q in &nfa.accepting {
        out.add_edge(q, sink, EdgeLabel::consume(end.clone()));
    }
    out.add_edge(sink, sink, EdgeLabel::consume(end));
    out.initial = BTreeSet::from([pre]);
    out.accepting = BTreeSet::from([sink]);
    out.extended = true;
    out
}

/// Removes every zero-width edge by fusing its guard into the consuming
/// edges that follow, then prunes states that cannot partake in an
/// accepting run.  Requires an extended automaton: padding guarantees
/// the initial state has no outgoing and the accepting state no incoming
/// zero-width edges, so fusion alone preserves the language exactly.
pub fn eliminate_epsilons(nfa: &Nfa) -> Nfa {
    assert!(nfa.extended, "zero-width elimination expects an extended automaton");
    let n = nfa.num_states();

    // Fused edge set: for every state, the guarded closure over
    // zero-width edges followed by one consuming edge.
    let mut fused: Vec<Vec<(RangeSet, BoundaryPred, StateId)>> = vec![Vec::new(); n];
    for s in 0..n {
        let mut edges: HashSet<(RangeSet, BoundaryPred, StateId)> = HashSet::new();
        for (t, prefix) in zero_width_closure(nfa, s) {
            for (label, u) in &nfa.out[t] {
                let EdgeLabel::Consume { ranges, guard } = label else { continue };
                let total = BoundaryPred::and2(prefix.clone(), guard.clone());
                if total.is_false() {
                    continue;
                }
                let narrowed = ranges.intersect(&total.project_cur());
                if narrowed.is_empty() {
                    continue;
                }
                edges.insert((narrowed, total, *u));
            }
        }
        let mut sorted: Vec<_> = edges.into_iter().collect();
        sorted.sort();
        fused[s] = sorted;
    }

    // Keep only states on some initial-to-accepting path.
    let forward = reach(nfa.initial.iter().copied(), |s| {
        fused[s].iter().map(|&(_, _, u)| u).collect()
    });
    let mut incoming: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in 0..n {
        for &(_, _, u) in &fused[s] {
            incoming[u].push(s);
        }
    }
    let backward =
        reach(nfa.accepting.iter().copied(), |s| incoming[s].clone());
    let mut renumber: HashMap<StateId, StateId> = HashMap::new();
    for s in 0..n {
        if forward.contains(&s) && backward.contains(&s) {
            let next = renumber.len();
            renumber.insert(s, next);
        }
    }

    let mut out = Nfa::new(nfa.var);
    out.extended = true;
    for _ in 0..renumber.len() {
        out.add_state();
    }
    for (&old, &new) in &renumber {
        for (ranges, guard, target) in &fused[old] {
            if let Some(&t) = renumber.get(target) {
                out.add_edge(
                    new,
                    t,
                    EdgeLabel::Consume { ranges: ranges.clone(), guard: guard.clone() },
                );
            }
        }
    }
    out.initial = nfa.initial.iter().filter_map(|q| renumber.get(q).copied()).collect();
    out.accepting = nfa.accepting.iter().filter_map(|q| renumber.get(q).copied()).collect();
    out
}

/// All `(state, guard)` pairs reachable from `start` through zero-width
/// edges, the guard being the conjunction along the path.  Guards are
/// kept canonical, so the visited set is finite: there are only so many
/// subsets of the guards on the automaton's zero-width edges.
fn zero_width_closure(nfa: &Nfa, start: StateId) -> Vec<(StateId, BoundaryPred)> {
    let mut seen: HashSet<(StateId, BoundaryPred)> = HashSet::new();
    let mut work = vec![(start, BoundaryPred::tt())];
    seen.insert(work[0].clone());
    while let Some((s, g)) = work.pop() {
        for (label, t) in &nfa.out[s] {
            let EdgeLabel::ZeroWidth { guard } = label else { continue };
            let g2 = BoundaryPred::and2(g.clone(), guard.clone());
            if g2.is_false() || !g2.satisfiable() {
                continue;
            }
            let entry = (*t, g2);
            if !seen.contains(&entry) {
                seen.insert(entry.clone());
                work.push(entry);
            }
        }
    }
    seen.into_iter().collect()
}

fn reach(
    seeds: impl Iterator<Item = StateId>,
    successors: impl Fn(StateId) -> Vec<StateId>,
) -> HashSet<StateId> {
    let mut seen: HashSet<StateId> = seeds.collect();
    let mut work: Vec<StateId> = seen.iter().copied().collect();
    while let Some(s) = work.pop() {
        for t in successors(s) {
            if seen.insert(t) {
                work.push(t);
            }
        }
    }
    seen
}

/// Reverses an automaton: edges flip direction, initial and accepting
/// states trade places, and every guard offset `o` becomes `-1-o`
/// because the symbol "just consumed" in one direction is the one "up
/// next" in the other.
pub fn reverse(nfa: &Nfa) -> Nfa {
    let mut out = Nfa::new(nfa.var);
    out.extended = nfa.extended;
    for _ in 0..nfa.num_states() {
        out.add_state();
    }
    for from in 0..nfa.num_states() {
        for (label, to) in &nfa.out[from] {
            let flipped = match label {
                EdgeLabel::Consume { ranges, guard } => {
                    EdgeLabel::Consume { ranges: ranges.clone(), guard: guard.flip_offsets() }
                }
                EdgeLabel::ZeroWidth { guard } => {
                    EdgeLabel::ZeroWidth { guard: guard.flip_offsets() }
                }
            };
            out.add_edge(*to, from, flipped);
        }
    }
    out.initial = nfa.accepting.clone();
    out.accepting = nfa.initial.clone();
    out
}
