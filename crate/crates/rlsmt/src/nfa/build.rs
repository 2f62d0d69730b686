//! Automaton construction from desugared regex ASTs.

use super::{BoundaryPred, EdgeLabel, Nfa, StateId, VarId};
use crate::regex::{AnchorKind, Ast};
use crate::symbols::RangeSet;

/// Thompson-style construction.  Expects the core fragment (no `+`, `?`,
/// or counted repetition); desugar first.  Produces one initial and one
/// accepting state and at most two states per AST node.
pub fn thompson(ast: &Ast, var: VarId) -> Nfa {
    assert!(ast.is_core(), "thompson() expects a desugared AST");
    let mut nfa = Nfa::new(var);
    let (entry, exit) = build(&mut nfa, ast);
    nfa.initial.insert(entry);
    nfa.accepting.insert(exit);
    nfa
}

fn build(nfa: &mut Nfa, ast: &Ast) -> (StateId, StateId) {
    match ast {
        Ast::Empty => {
            let s = nfa.add_state();
            (s, s)
        }
        Ast::Class(set) => {
            let entry = nfa.add_state();
            let exit = nfa.add_state();
            nfa.add_edge(entry, exit, EdgeLabel::consume(set.clone()));
            (entry, exit)
        }
        Ast::Anchor(kind) => {
            let entry = nfa.add_state();
            let exit = nfa.add_state();
            let guard = match kind {
                AnchorKind::Start => BoundaryPred::start_anchor(),
                AnchorKind::End => BoundaryPred::end_anchor(),
                AnchorKind::WordBoundary => BoundaryPred::word_boundary(),
                AnchorKind::NotWordBoundary => BoundaryPred::not_word_boundary(),
            };
            nfa.add_edge(entry, exit, EdgeLabel::zero_width(guard));
            (entry, exit)
        }
        Ast::Concat(parts) => {
            debug_assert!(!parts.is_empty());
            let mut first: Option<StateId> = None;
            let mut prev_exit: Option<StateId> = None;
            for part in parts {
                let (entry, exit) = build(nfa, part);
                if let Some(pe) = prev_exit {
                    nfa.add_edge(pe, entry, EdgeLabel::zero_width(BoundaryPred::tt()));
                } else {
                    first = Some(entry);
                }
                prev_exit = Some(exit);
            }
            (first.unwrap(), prev_exit.unwrap())
        }
        Ast::Alt(branches) => {
            let entry = nfa.add_state();
            let exit = nfa.add_state();
            for branch in branches {
                let (be, bx) = build(nfa, branch);
                nfa.add_edge(entry, be, EdgeLabel::zero_width(BoundaryPred::tt()));
                nfa.add_edge(bx, exit, EdgeLabel::zero_width(BoundaryPred::tt()));
            }
            (entry, exit)
        }
        Ast::Star(inner) => {
            let entry = nfa.add_state();
            let exit = nfa.add_state();
            let (ie, ix) = build(nfa, inner);
            let eps = || EdgeLabel::zero_width(BoundaryPred::tt());
            nfa.add_edge(entry, exit, eps());
            nfa.add_edge(entry, ie, eps());
            nfa.add_edge(ix, ie, eps());
            nfa.add_edge(ix, exit, eps());
            (entry, exit)
        }
        Ast::Plus(_) | Ast::Opt(_) | Ast::Repeat { .. } => {
            unreachable!("is_core was checked")
        }
    }
}

/// The one-state automaton accepting every byte string.  Kept minimal on
/// purpose: it is conjoined per variable during rewriting, so its size
/// shows up in every encoded problem.
pub fn universal(var: VarId) -> Nfa {
    let mut nfa = Nfa::new(var);
    let s = nfa.add_state();
    nfa.add_edge(s, s, EdgeLabel::consume(RangeSet::all_bytes()));
    nfa.initial.insert(s);
    nfa.accepting.insert(s);
    nfa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::{desugar, parse_regex, ParseOptions};

    fn compile(pattern: &str) -> Nfa {
        let ast = desugar(&parse_regex(pattern, ParseOptions::default()).unwrap()).unwrap();
        thompson(&ast, 0)
    }

    #[test]
    fn state_budget() {
        for pattern in ["", "a", "ab|cd", "(a|b)*abb", "^a(b|c)*$", "a{3,5}"] {
            let ast = desugar(&parse_regex(pattern, ParseOptions::default()).unwrap()).unwrap();
            let nfa = thompson(&ast, 0);
            assert!(
                nfa.num_states() <= 2 * ast.size(),
                "{pattern}: {} states for {} nodes",
                nfa.num_states(),
                ast.size()
            );
        }
    }

    #[test]
    fn single_entry_exit() {
        let nfa = compile("(a|b)*c");
        assert_eq!(nfa.initial.len(), 1);
        assert_eq!(nfa.accepting.len(), 1);
        assert!(!nfa.extended);
    }

    #[test]
    fn universal_is_one_state() {
        let u = universal(3);
        assert_eq!(u.num_states(), 1);
        assert_eq!(u.var, 3);
        assert_eq!(u.num_edges(), 1);
    }

    #[test]
    fn dump_is_stable() {
        let nfa = compile("a");
        assert_eq!(
            nfa.dump(),
            "var=0 states=2 initial={0} accepting={1}\n  0 -> 1 : sym=[97]\n"
        );
    }
}
