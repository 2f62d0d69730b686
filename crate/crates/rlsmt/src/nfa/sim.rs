//! Direct simulation of guarded automata, used as the mid-level oracle
//! between the regex matcher and the Boolean-level pipeline.

use std::collections::HashSet;

use super::{EdgeLabel, Nfa, StateId};
use crate::symbols::{Symbol, MAX_SYMBOL, SIGMA_END, SIGMA_START};

/// Runs `nfa` on a symbol word and reports acceptance.
///
/// Guards at the word edges see the conventional context: the symbol
/// before position 0 reads as the start mark and the symbol after the
/// last position as the end mark.  For extended automata running on
/// properly padded words those defaults are never load-bearing, but they
/// make the simulator total on raw words too.
pub fn nfa_accepts(nfa: &Nfa, word: &[Symbol]) -> Result<bool, String> {
    if let Some(&bad) = word.iter().find(|&&s| s > MAX_SYMBOL) {
        return Err(format!("symbol {bad} out of range"));
    }
    let prev_at = |pos: usize| if pos == 0 { SIGMA_START } else { word[pos - 1] };
    let next_at = |pos: usize| if pos == word.len() { SIGMA_END } else { word[pos] };

    let mut visited: HashSet<(StateId, usize)> = HashSet::new();
    let mut work: Vec<(StateId, usize)> = Vec::new();
    for &q in &nfa.initial {
        if visited.insert((q, 0)) {
            work.push((q, 0));
        }
    }
    while let Some((q, pos)) = work.pop() {
        if pos == word.len() && nfa.accepting.contains(&q) {
            return Ok(true);
        }
        for (label, to) in &nfa.out[q] {
            let target = match label {
                EdgeLabel::ZeroWidth { guard } => {
                    guard.eval(prev_at(pos), next_at(pos)).then_some((*to, pos))
                }
                EdgeLabel::Consume { ranges, guard } if pos < word.len() => {
                    let sym = word[pos];
                    (ranges.contains(sym) && guard.eval(prev_at(pos), sym))
                        .then_some((*to, pos + 1))
                }
                EdgeLabel::Consume { .. } => None,
            };
            if let Some(next) = target {
                if visited.insert(next) {
                    work.push(next);
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::super::{thompson, universal};
    use super::*;
    use crate::regex::{desugar, parse_regex, ParseOptions};

    fn accepts(pattern: &str, word: &str) -> bool {
        let ast = desugar(&parse_regex(pattern, ParseOptions::default()).unwrap()).unwrap();
        let nfa = thompson(&ast, 0);
        let syms: Vec<Symbol> = word.bytes().map(|b| b as Symbol).collect();
        nfa_accepts(&nfa, &syms).unwrap()
    }

    #[test]
    fn matches_regex_semantics() {
        assert!(accepts("a(b|c)*", "abcbc"));
        assert!(!accepts("a(b|c)*", "abd"));
        assert!(accepts("a*", ""));
        assert!(!accepts("a+", ""));
        assert!(accepts("^ab$", "ab"));
        assert!(!accepts("a^b", "ab"));
        assert!(accepts(r"\bfoo\b", "foo"));
        assert!(!accepts(r"foo\bd", "food"));
    }

    #[test]
    fn agrees_with_reference_matcher_on_small_words() {
        let patterns =
            ["(a|(^b)|(c$))*", "a*b|c", r"\ba", "(ab)*", "a(|b)(c|)", "^(a|b)+$", "x{2,3}"];
        let alphabet = [b'a', b'b', b'c', b'x'];
        for pattern in patterns {
            let ast = parse_regex(pattern, ParseOptions::default()).unwrap();
            let nfa = thompson(&desugar(&ast).unwrap(), 0);
            let mut words: Vec<Vec<u8>> = vec![Vec::new()];
            for len in 0..=3usize {
                let _ = len;
                let mut next = Vec::new();
                for w in &words {
                    let syms: Vec<Symbol> = w.iter().map(|&b| b as Symbol).collect();
                    assert_eq!(
                        nfa_accepts(&nfa, &syms).unwrap(),
                        crate::regex::regex_match(&ast, w),
                        "pattern {pattern} word {:?}",
                        String::from_utf8_lossy(w)
                    );
                    for &b in &alphabet {
                        let mut w2 = w.clone();
                        w2.push(b);
                        next.push(w2);
                    }
                }
                words = next;
            }
        }
    }

    #[test]
    fn universal_accepts_bytes_not_marks() {
        let u = universal(0);
        assert!(nfa_accepts(&u, &[]).unwrap());
        assert!(nfa_accepts(&u, &[97, 0, 255]).unwrap());
        assert!(!nfa_accepts(&u, &[SIGMA_START]).unwrap());
        assert!(!nfa_accepts(&u, &[97, SIGMA_END]).unwrap());
    }

    #[test]
    fn rejects_out_of_range_symbols() {
        let u = universal(0);
        assert!(nfa_accepts(&u, &[300]).is_err());
    }
}
