//! Automata with Boolean-formula transition structure.
//!
//! Where an NFA keeps a set of active states, a Boolean-level automaton
//! keeps a formula over state variables.  Acceptance starts from the
//! initial formula and substitutes, per consumed symbol, every state
//! variable with its transition formula; the word is accepted when the
//! final formula evaluates to true under the accepting-state assignment.
//! The payoff is closure under the propositional connectives at zero
//! cost: union and intersection just combine initial formulas over the
//! disjoint union of state spaces, and complement negates the initial
//! formula — no determinization, no product construction.

use crate::logic::{Arena, FormulaId};
use crate::nfa::{BoundaryPred, EdgeLabel, Nfa, VarId};
use crate::symbols::{RangeSet, Symbol, MAX_SYMBOL, SIGMA_START};

/// One alternative of a transition function: when the consumed symbol
/// lies in `ranges` and `guard` holds over (previous, consumed), the
/// state variable rewrites to `target`.  A symbol matching several
/// alternatives takes their disjunction; matching none rewrites to
/// false.
#[derive(Debug, Clone)]
pub struct Alt {
    pub ranges: RangeSet,
    pub guard: BoundaryPred,
    pub target: FormulaId,
}

#[derive(Debug, Clone)]
pub struct BfaState {
    /// The string variable whose symbols drive this state.
    pub var: VarId,
    pub accepting: bool,
}

#[derive(Debug, Clone)]
pub struct Bfa {
    pub arena: Arena,
    pub states: Vec<BfaState>,
    /// Initial formula over state variables.
    pub init: FormulaId,
    /// Transition alternatives per state.
    pub delta: Vec<Vec<Alt>>,
    /// All member automata were padding-extended.
    pub extended: bool,
    /// All member automata were reversed after elimination.
    pub reversed: bool,
    /// Number of string variables the automaton reads (tracks are
    /// indexed 0..num_vars even if some never occur).
    pub num_vars: usize,
}

/// Converts an eliminated NFA.  The initial formula is the disjunction
/// of the initial states, the transition alternatives mirror the edges.
pub fn nfa_to_bfa(nfa: &Nfa, reversed: bool) -> Bfa {
    assert!(
        !nfa.has_zero_width_edges(),
        "conversion requires an automaton without zero-width edges"
    );
    let mut arena = Arena::new();
    let states: Vec<BfaState> = (0..nfa.num_states())
        .map(|q| BfaState { var: nfa.var, accepting: nfa.accepting.contains(&q) })
        .collect();
    let state_vars: Vec<FormulaId> = (0..nfa.num_states()).map(|q| arena.var(q as u32)).collect();
    let init_parts: Vec<FormulaId> = nfa.initial.iter().map(|&q| state_vars[q]).collect();
    let init = arena.or(init_parts);
    let delta = (0..nfa.num_states())
        .map(|q| {
            nfa.out[q]
                .iter()
                .map(|(label, to)| {
                    let EdgeLabel::Consume { ranges, guard } = label else { unreachable!() };
                    Alt { ranges: ranges.clone(), guard: guard.clone(), target: state_vars[*to] }
                })
                .collect()
        })
        .collect();
    Bfa {
        arena,
        states,
        init,
        delta,
        extended: nfa.extended,
        reversed,
        num_vars: nfa.var + 1,
    }
}

impl Bfa {
    /// Union: disjoint sum of the state spaces, disjunction of the
    /// initial formulas.
    pub fn union(a: &Bfa, b: &Bfa) -> Bfa {
        Bfa::combine(a, b, Arena::or2)
    }

    /// Intersection: disjoint sum of the state spaces, conjunction of
    /// the initial formulas.
    pub fn intersect(a: &Bfa, b: &Bfa) -> Bfa {
        Bfa::combine(a, b, Arena::and2)
    }

    /// Complement: same states and transitions, negated initial formula.
    pub fn complement(mut self) -> Bfa {
        self.init = self.arena.not(self.init);
        self
    }

    fn combine(a: &Bfa, b: &Bfa, op: fn(&mut Arena, FormulaId, FormulaId) -> FormulaId) -> Bfa {
        assert_eq!(a.extended, b.extended, "cannot mix extended and raw automata");
        assert_eq!(a.reversed, b.reversed, "cannot mix directions");
        let offset = a.states.len() as u32;
        let mut arena = Arena::new();
        let mut roots = a.arena.copy_into(&collect_roots(a), &mut arena, &|ar, v| ar.var(v));
        let b_roots =
            b.arena.copy_into(&collect_roots(b), &mut arena, &|ar, v| ar.var(v + offset));
        let a_init = roots.remove(0);
        let b_init = b_roots[0];
        let init = op(&mut arena, a_init, b_init);

        let mut states = a.states.clone();
        states.extend(b.states.iter().cloned());
        let mut delta: Vec<Vec<Alt>> = Vec::with_capacity(states.len());
        let mut a_targets = roots.into_iter();
        for q in a.delta.iter() {
            delta.push(
                q.iter()
                    .map(|alt| Alt {
                        ranges: alt.ranges.clone(),
                        guard: alt.guard.clone(),
                        target: a_targets.next().unwrap(),
                    })
                    .collect(),
            );
        }
        let mut b_targets = b_roots.into_iter().skip(1);
        for q in b.delta.iter() {
            delta.push(
                q.iter()
                    .map(|alt| Alt {
                        ranges: alt.ranges.clone(),
                        guard: alt.guard.clone(),
                        target: b_targets.next().unwrap(),
                    })
                    .collect(),
            );
        }
        Bfa {
            arena,
            states,
            init,
            delta,
            extended: a.extended,
            reversed: a.reversed,
            num_vars: a.num_vars.max(b.num_vars),
        }
    }

    /// The rewrite target for state `q` on consuming `sym` after `prev`:
    /// disjunction of the matching alternatives, evaluated lazily by the
    /// caller via the returned alternative targets.
    pub fn matching_targets(&self, q: usize, prev: Symbol, sym: Symbol) -> Vec<FormulaId> {
        self.delta[q]
            .iter()
            .filter(|alt| alt.ranges.contains(sym) && alt.guard.eval(prev, sym))
            .map(|alt| alt.target)
            .collect()
    }
}

fn collect_roots(bfa: &Bfa) -> Vec<FormulaId> {
    let mut roots = vec![bfa.init];
    roots.extend(bfa.delta.iter().flatten().map(|alt| alt.target));
    roots
}

/// Acceptance.  `words` holds one *forward* padded symbol word per
/// string variable, regardless of the automaton's direction; all must
/// have the same length (padding is what makes that possible).
///
/// A forward automaton is evaluated backward: value every state at the
/// end of the word by its accepting flag, pull the values back through
/// the transition formulas one symbol at a time, and read the initial
/// formula at the start.  Equivalent to forward substitution but never
/// grows a formula.
///
/// A reversed automaton stores each original edge backward, so its
/// transition alternatives for a state are the original edges *into*
/// it.  That turns acceptance into a deterministic forward simulation:
/// start from the accepting flags (the original initial states), set
/// each state bit to "some stored alternative fires from a set bit",
/// and read the initial formula — the original acceptance condition —
/// at the end of the word.  Since reversal flipped the guard offsets,
/// the guard's "up next" slot is bound to the symbol before the one
/// consumed and vice versa; that crossing is what keeps every guard
/// causal even though the edges face backward.
pub fn bfa_accepts(bfa: &Bfa, words: &[Vec<Symbol>]) -> Result<bool, String> {
    check_words(bfa, words)?;
    let len = words.first().map_or(0, Vec::len);
    if bfa.reversed {
        let mut bits: Vec<bool> = bfa.states.iter().map(|s| s.accepting).collect();
        for i in 0..len {
            let mut next = Vec::with_capacity(bits.len());
            for q in 0..bfa.states.len() {
                let track = &words[bfa.states[q].var];
                let reg = if i == 0 { SIGMA_START } else { track[i - 1] };
                let fired = bfa.delta[q].iter().any(|alt| {
                    alt.ranges.contains(track[i])
                        && alt.guard.eval(track[i], reg)
                        && bfa.arena.eval(alt.target, &|v| bits[v as usize])
                });
                next.push(fired);
            }
            bits = next;
        }
        Ok(bfa.arena.eval(bfa.init, &|v| bits[v as usize]))
    } else {
        let mut values: Vec<bool> = bfa.states.iter().map(|s| s.accepting).collect();
        for i in (0..len).rev() {
            let mut next = Vec::with_capacity(values.len());
            for q in 0..bfa.states.len() {
                let track = &words[bfa.states[q].var];
                let prev = if i == 0 { SIGMA_START } else { track[i - 1] };
                let fired = bfa
                    .matching_targets(q, prev, track[i])
                    .into_iter()
                    .any(|t| bfa.arena.eval(t, &|v| values[v as usize]));
                next.push(fired);
            }
            values = next;
        }
        Ok(bfa.arena.eval(bfa.init, &|v| values[v as usize]))
    }
}

/// Acceptance by substitution, the textbook reading: keep a formula
/// over state variables and substitute every variable by its transition
/// formula per consumed symbol.  For a forward automaton the formula
/// starts at the initial one and the word is walked front to back; for
/// a reversed automaton the roles mirror: walk back to front and close
/// with the accepting assignment at what was the start.  Exposed for
/// differential testing against [`bfa_accepts`]; prefer that one.
pub fn bfa_accepts_by_substitution(bfa: &Bfa, words: &[Vec<Symbol>]) -> Result<bool, String> {
    check_words(bfa, words)?;
    let len = words.first().map_or(0, Vec::len);
    let mut arena = bfa.arena.clone();
    let mut g = bfa.init;
    let steps: Vec<usize> =
        if bfa.reversed { (0..len).rev().collect() } else { (0..len).collect() };
    for i in steps {
        let mut replacements: Vec<FormulaId> = Vec::with_capacity(bfa.states.len());
        for q in 0..bfa.states.len() {
            let track = &words[bfa.states[q].var];
            let reg = if i == 0 { SIGMA_START } else { track[i - 1] };
            let parts: Vec<FormulaId> = if bfa.reversed {
                bfa.delta[q]
                    .iter()
                    .filter(|alt| alt.ranges.contains(track[i]) && alt.guard.eval(track[i], reg))
                    .map(|alt| alt.target)
                    .collect()
            } else {
                bfa.matching_targets(q, reg, track[i])
            };
            replacements.push(arena.or(parts));
        }
        g = arena.substitute(g, &|v| Some(replacements[v as usize]));
    }
    Ok(arena.eval(g, &|v| bfa.states[v as usize].accepting))
}

fn check_words(bfa: &Bfa, words: &[Vec<Symbol>]) -> Result<(), String> {
    if words.len() != bfa.num_vars {
        return Err(format!("expected {} words, got {}", bfa.num_vars, words.len()));
    }
    let len = words.first().map_or(0, Vec::len);
    if words.iter().any(|w| w.len() != len) {
        return Err("all words must have equal length".to_string());
    }
    if let Some(&bad) = words.iter().flatten().find(|&&s| s > MAX_SYMBOL) {
        return Err(format!("symbol {bad} out of range"));
    }
    Ok(())
}
