use super::*;
use crate::bfa::bfa_accepts;
use crate::regex::{parse_regex, ParseOptions};
use crate::symbols::{Symbol, SIGMA_END, SIGMA_START};

fn member(var: VarId, pattern: &str) -> Formula {
    Formula::Member {
        var,
        regex: parse_regex(pattern, ParseOptions::default()).unwrap(),
        pattern: pattern.to_string(),
    }
}

fn problem(num_vars: usize, formula: Formula) -> Problem {
    Problem {
        var_names: (0..num_vars).map(|i| format!("v{i}")).collect(),
        formula,
    }
}

fn padded(word: &[u8], lead: usize, trail: usize) -> Vec<Symbol> {
    let mut w = vec![SIGMA_START; lead];
    w.extend(word.iter().map(|&b| b as Symbol));
    w.extend(std::iter::repeat(SIGMA_END).take(trail));
    w
}

/// Pads a tuple of raw words to a common length.  Acceptance always
/// takes the forward word order, whatever the automaton's direction.
fn pad_tuple(words: &[Vec<u8>]) -> Vec<Vec<Symbol>> {
    let max = words.iter().map(Vec::len).max().unwrap_or(0);
    words.iter().map(|w| padded(w, 1, max - w.len() + 1)).collect()
}

fn words_up_to(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &b in alphabet {
                let mut w2 = w.clone();
                w2.push(b);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[test]
fn evaluate_follows_connectives() {
    let f = Formula::And(vec![
        member(0, "a*"),
        Formula::Not(Box::new(member(0, "aa*"))),
    ]);
    assert!(f.evaluate(&[b"".to_vec()]));
    assert!(!f.evaluate(&[b"a".to_vec()]));
    assert!(!f.evaluate(&[b"b".to_vec()]));
    assert_eq!(f.num_literals(), 2);
    assert_eq!(f.max_var(), Some(0));
}

#[test]
fn rewrite_covers_every_variable() {
    let f = member(1, "ab");
    let rewritten = mv_rewrite(&f, 3);
    let Formula::And(parts) = &rewritten else { panic!() };
    assert_eq!(parts.len(), 4);
    let mut vars = Vec::new();
    rewritten.for_each_member(&mut |v, _| vars.push(v));
    assert_eq!(vars, [1, 0, 1, 2]);
}

#[test]
fn universal_conjunct_compiles_small() {
    // Three states per variable: the padding wrapper around the single
    // all-bytes loop.
    let bfa = compile_formula(&universal_member(0), Mode::Forward).unwrap();
    assert_eq!(bfa.states.len(), 3);
}

#[test]
fn compile_agrees_with_evaluate_both_modes() {
    let formulas = [
        member(0, "a(b|c)*"),
        Formula::Not(Box::new(member(0, "(ab)*"))),
        Formula::And(vec![member(0, "[ab]*"), Formula::Not(Box::new(member(0, "a[ab]*")))]),
        Formula::Or(vec![member(0, "^ab"), member(0, "ba$")]),
        Formula::And(vec![
            member(0, "(a|b)*"),
            Formula::Not(Box::new(Formula::Not(Box::new(member(0, "a*"))))),
        ]),
    ];
    for formula in &formulas {
        let p = problem(1, formula.clone());
        for mode in [Mode::Forward, Mode::Reversed] {
            let bfa = compile_problem(&p, mode).unwrap();
            assert_eq!(bfa.reversed, mode == Mode::Reversed);
            for word in words_up_to(b"abc", 4) {
                let expected = formula.evaluate(std::slice::from_ref(&word));
                let tuple = pad_tuple(std::slice::from_ref(&word));
                assert_eq!(
                    bfa_accepts(&bfa, &tuple).unwrap(),
                    expected,
                    "mode {mode:?} word {:?}",
                    String::from_utf8_lossy(&word)
                );
            }
        }
    }
}

#[test]
fn two_variable_compile_agrees_with_evaluate() {
    let formula = Formula::Or(vec![
        Formula::And(vec![member(0, "a+"), member(1, "b+")]),
        Formula::Not(Box::new(member(1, "(ab)*"))),
    ]);
    let p = problem(2, formula.clone());
    let words = words_up_to(b"ab", 2);
    for mode in [Mode::Forward, Mode::Reversed] {
        let bfa = compile_problem(&p, mode).unwrap();
        assert_eq!(bfa.num_vars, 2);
        for x in &words {
            for y in &words {
                let tuple_raw = vec![x.clone(), y.clone()];
                let expected = formula.evaluate(&tuple_raw);
                let tuple = pad_tuple(&tuple_raw);
                assert_eq!(
                    bfa_accepts(&bfa, &tuple).unwrap(),
                    expected,
                    "mode {mode:?} x {:?} y {:?}",
                    String::from_utf8_lossy(x),
                    String::from_utf8_lossy(y)
                );
            }
        }
    }
}

#[test]
fn rewrite_vetoes_junk_padding() {
    // Without the universal conjunct, the complement of an extended
    // automaton accepts garbage like an unpadded word.  With it, every
    // accepted tuple is properly padded.
    let raw = Formula::Not(Box::new(member(0, "a")));
    let bare = compile_formula(&raw, Mode::Forward).unwrap();
    let junk = vec![vec![98u16, 98]];
    assert!(bfa_accepts(&bare, &junk).unwrap(), "complement alone accepts junk");
    let guarded = compile_formula(&mv_rewrite(&raw, 1), Mode::Forward).unwrap();
    assert!(!bfa_accepts(&guarded, &junk).unwrap());
    assert!(bfa_accepts(&guarded, &[padded(b"bb", 1, 1)]).unwrap());
    assert!(!bfa_accepts(&guarded, &[padded(b"a", 1, 1)]).unwrap());
}

#[test]
fn empty_connectives_are_constants() {
    let t = compile_formula(&Formula::And(vec![]), Mode::Forward).unwrap();
    assert!(bfa_accepts(&t, &[]).unwrap());
    let f = compile_formula(&Formula::Or(vec![]), Mode::Forward).unwrap();
    assert!(!bfa_accepts(&f, &[]).unwrap());
}

#[test]
fn validity_as_unsat_complement() {
    // A implication is valid iff its negation has no satisfying
    // assignment; here the negation still accepts nothing even over
    // every word up to length 6.
    let implication_negated = Formula::And(vec![
        Formula::Or(vec![member(0, "(ab)*"), member(0, "(cde)*")]),
        Formula::Not(Box::new(member(0, "((cde)|(ab))*"))),
    ]);
    let p = problem(1, implication_negated.clone());
    let bfa = compile_problem(&p, Mode::Reversed).unwrap();
    for word in words_up_to(b"abcde", 4) {
        assert!(!implication_negated.evaluate(std::slice::from_ref(&word)));
        let tuple = pad_tuple(std::slice::from_ref(&word));
        assert!(!bfa_accepts(&bfa, &tuple).unwrap());
    }
}
