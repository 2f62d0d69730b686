//! Problems: Boolean combinations of regular-membership constraints.
//!
//! A problem asks whether string variables can be chosen so that a
//! propositional formula over atoms `var ∈ L(regex)` holds.  This module
//! owns the formula representation, direct evaluation against candidate
//! assignments, and compilation down to a single Boolean-level automaton
//! whose language is exactly the satisfying assignments (padded and
//! tupled).

use crate::bfa::{nfa_to_bfa, Bfa};
use crate::logic::Arena;
use crate::nfa::{eliminate_epsilons, extend_padding, reverse, thompson, universal, VarId};
use crate::regex::{desugar, regex_match, Ast, RegexError};
use crate::symbols::RangeSet;

/// Which direction the automata face in the encoded transition system.
///
/// `Reversed` runs the automaton back-to-front over the word, which
/// turns the Boolean initial formula into the *target* of reachability
/// and leaves a deterministic update — the default, and the only mode
/// the unreachability engine accepts.  `Forward` keeps the word order
/// and yields a relational encoding usable for bounded checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Forward,
    Reversed,
}

#[derive(Debug, Clone)]
pub enum Formula {
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Member { var: VarId, regex: Ast, pattern: String },
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub var_names: Vec<String>,
    pub formula: Formula,
}

impl Formula {
    /// Truth of the formula under a concrete assignment of byte strings.
    pub fn evaluate(&self, words: &[Vec<u8>]) -> bool {
        match self {
            Formula::And(kids) => kids.iter().all(|k| k.evaluate(words)),
            Formula::Or(kids) => kids.iter().any(|k| k.evaluate(words)),
            Formula::Not(inner) => !inner.evaluate(words),
            Formula::Member { var, regex, .. } => regex_match(regex, &words[*var]),
        }
    }

    pub fn num_literals(&self) -> usize {
        match self {
            Formula::And(kids) | Formula::Or(kids) => {
                kids.iter().map(Formula::num_literals).sum()
            }
            Formula::Not(inner) => inner.num_literals(),
            Formula::Member { .. } => 1,
        }
    }

    pub fn max_var(&self) -> Option<VarId> {
        match self {
            Formula::And(kids) | Formula::Or(kids) => {
                kids.iter().filter_map(Formula::max_var).max()
            }
            Formula::Not(inner) => inner.max_var(),
            Formula::Member { var, .. } => Some(*var),
        }
    }

    pub fn for_each_member<'a>(&'a self, f: &mut dyn FnMut(VarId, &'a Ast)) {
        match self {
            Formula::And(kids) | Formula::Or(kids) => {
                for k in kids {
                    k.for_each_member(f);
                }
            }
            Formula::Not(inner) => inner.for_each_member(f),
            Formula::Member { var, regex, .. } => f(*var, regex),
        }
    }
}

impl Problem {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }
}

/// The `.*`-shaped AST (optionally under the hood of desugaring) whose
/// language is all byte strings; compiled to the one-state automaton.
fn is_universal_star(ast: &Ast) -> bool {
    match ast {
        Ast::Star(inner) => matches!(&**inner, Ast::Class(set) if *set == RangeSet::all_bytes()),
        _ => false,
    }
}

fn universal_member(var: VarId) -> Formula {
    Formula::Member {
        var,
        regex: Ast::Star(Box::new(Ast::Class(RangeSet::all_bytes()))),
        pattern: "(any byte)*".to_string(),
    }
}

/// Conjoins one universal constraint per variable.  Besides forcing
/// every variable to show up in the automaton, this is what rules the
/// junk assignments out after complementation: a complemented extended
/// automaton accepts badly padded or out-of-alphabet tuples, and the
/// per-variable conjunct — whose own extension only accepts proper
/// padding — vetoes them.
pub fn mv_rewrite(formula: &Formula, num_vars: usize) -> Formula {
    let mut parts = vec![formula.clone()];
    parts.extend((0..num_vars).map(universal_member));
    Formula::And(parts)
}

/// Compiles a formula to a single Boolean-level automaton.  Membership
/// atoms run through the regex pipeline (desugar, build, extend,
/// eliminate, and in reversed mode a final flip); connectives map to the
/// automaton combinators.  Callers almost always want the result of
/// [`mv_rewrite`] here, not the raw formula.
pub fn compile_formula(formula: &Formula, mode: Mode) -> Result<Bfa, RegexError> {
    let reversed = mode == Mode::Reversed;
    Ok(match formula {
        Formula::And(kids) => {
            let mut bfas = kids.iter().map(|k| compile_formula(k, mode));
            match bfas.next() {
                None => constant_bfa(true, reversed),
                Some(first) => {
                    let mut acc = first?;
                    for b in bfas {
                        acc = Bfa::intersect(&acc, &b?);
                    }
                    acc
                }
            }
        }
        Formula::Or(kids) => {
            let mut bfas = kids.iter().map(|k| compile_formula(k, mode));
            match bfas.next() {
                None => constant_bfa(false, reversed),
                Some(first) => {
                    let mut acc = first?;
                    for b in bfas {
                        acc = Bfa::union(&acc, &b?);
                    }
                    acc
                }
            }
        }
        Formula::Not(inner) => compile_formula(inner, mode)?.complement(),
        Formula::Member { var, regex, .. } => {
            let nfa = if is_universal_star(regex) {
                universal(*var)
            } else {
                thompson(&desugar(regex)?, *var)
            };
            let mut nfa = eliminate_epsilons(&extend_padding(&nfa));
            if reversed {
                nfa = reverse(&nfa);
            }
            nfa_to_bfa(&nfa, reversed)
        }
    })
}

fn constant_bfa(value: bool, reversed: bool) -> Bfa {
    let arena = Arena::new();
    let init = arena.constant(value);
    Bfa {
        arena,
        states: Vec::new(),
        init,
        delta: Vec::new(),
        extended: true,
        reversed,
        num_vars: 0,
    }
}

/// Compiles a whole problem: rewrite, then build in the given mode.
pub fn compile_problem(problem: &Problem, mode: Mode) -> Result<Bfa, RegexError> {
    let rewritten = mv_rewrite(&problem.formula, problem.num_vars());
    let bfa = compile_formula(&rewritten, mode)?;
    debug_assert_eq!(bfa.num_vars, problem.num_vars().max(bfa.num_vars));
    Ok(bfa)
}

#[cfg(test)]
mod tests;
