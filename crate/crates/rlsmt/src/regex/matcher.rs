//! Reference matcher: decides whole-string membership directly on the
//! parsed AST.  Deliberately independent of the desugaring and automaton
//! pipeline so the two implementations can be checked against each other.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::{AnchorKind, Ast};
use crate::symbols::is_word_byte;

/// True iff `word` as a whole belongs to the language of `ast`.
pub fn regex_match(ast: &Ast, word: &[u8]) -> bool {
    let mut m = Matcher { word, memo: HashMap::new() };
    m.ends(ast, 0, 0).contains(&word.len())
}

/// Positional evaluator.  `ends(ast, id, pos)` is the set of offsets `e`
/// with `word[pos..e]` in the language of `ast`; anchors consult the
/// surrounding word, so sub-results are only valid for this word.
/// Nodes are numbered in preorder (`id` of a child derived from the
/// parent's) to key the memo table without hashing subtrees.
struct Matcher<'a> {
    word: &'a [u8],
    memo: HashMap<(usize, usize), Rc<BTreeSet<usize>>>,
}

impl<'a> Matcher<'a> {
    fn ends(&mut self, ast: &Ast, id: usize, pos: usize) -> Rc<BTreeSet<usize>> {
        if let Some(cached) = self.memo.get(&(id, pos)) {
            return cached.clone();
        }
        let result = Rc::new(self.compute(ast, id, pos));
        self.memo.insert((id, pos), result.clone());
        result
    }

    fn compute(&mut self, ast: &Ast, id: usize, pos: usize) -> BTreeSet<usize> {
        match ast {
            Ast::Empty => BTreeSet::from([pos]),
            Ast::Class(set) => match self.word.get(pos) {
                Some(&b) if set.contains(b as u16) => BTreeSet::from([pos + 1]),
                _ => BTreeSet::new(),
            },
            Ast::Anchor(kind) => {
                if self.anchor_holds(*kind, pos) {
                    BTreeSet::from([pos])
                } else {
                    BTreeSet::new()
                }
            }
            Ast::Concat(parts) => {
                let mut starts = BTreeSet::from([pos]);
                let mut child_id = id + 1;
                for part in parts {
                    let mut next = BTreeSet::new();
                    for &s in &starts {
                        next.extend(self.ends(part, child_id, s).iter());
                    }
                    starts = next;
                    if starts.is_empty() {
                        break;
                    }
                    child_id += part.size();
                }
                starts
            }
            Ast::Alt(branches) => {
                let mut out = BTreeSet::new();
                let mut child_id = id + 1;
                for branch in branches {
                    out.extend(self.ends(branch, child_id, pos).iter());
                    child_id += branch.size();
                }
                out
            }
            Ast::Star(inner) => self.closure(inner, id + 1, BTreeSet::from([pos])),
            Ast::Plus(inner) => {
                let first: BTreeSet<usize> =
                    self.ends(inner, id + 1, pos).iter().copied().collect();
                self.closure(inner, id + 1, first)
            }
            Ast::Opt(inner) => {
                let mut out: BTreeSet<usize> =
                    self.ends(inner, id + 1, pos).iter().copied().collect();
                out.insert(pos);
                out
            }
            Ast::Repeat { node, min, max } => self.repeat(node, id + 1, pos, *min, *max),
        }
    }

    /// Reflexive-transitive closure of one `inner` application over end
    /// positions.  Zero-width matches cannot loop: only unseen positions
    /// enter the worklist.
    fn closure(&mut self, inner: &Ast, inner_id: usize, seed: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = seed.clone();
        let mut work: Vec<usize> = seed.into_iter().collect();
        while let Some(s) = work.pop() {
            for &e in self.ends(inner, inner_id, s).iter() {
                if out.insert(e) {
                    work.push(e);
                }
            }
        }
        out
    }

    fn repeat(
        &mut self,
        inner: &Ast,
        inner_id: usize,
        pos: usize,
        min: u32,
        max: Option<u32>,
    ) -> BTreeSet<usize> {
        // `cur` tracks positions after exactly i copies.  The step
        // function is deterministic on sets, so once a set repeats the
        // whole trajectory repeats; recording the history lets us
        // fast-forward through astronomically large counts.
        let mut cur = BTreeSet::from([pos]);
        let mut history: Vec<BTreeSet<usize>> = vec![cur.clone()];
        let mut seen: HashMap<Vec<usize>, u64> = HashMap::new();
        seen.insert(cur.iter().copied().collect(), 0);
        let mut i: u64 = 0;
        let min = min as u64;
        while i < min {
            cur = self.step(inner, inner_id, &cur);
            i += 1;
            if cur.is_empty() {
                return BTreeSet::new();
            }
            let key: Vec<usize> = cur.iter().copied().collect();
            if let Some(&j) = seen.get(&key) {
                let period = i - j;
                cur = history[(j + (min - j) % period) as usize].clone();
                i = min;
                break;
            }
            seen.insert(key, i);
            history.push(cur.clone());
        }
        match max {
            None => self.closure(inner, inner_id, cur),
            Some(max) => {
                let max = max as u64;
                let mut out = cur.clone();
                let mut tail_seen: BTreeSet<Vec<usize>> = BTreeSet::new();
                while i < max {
                    cur = self.step(inner, inner_id, &cur);
                    i += 1;
                    if cur.is_empty() {
                        break;
                    }
                    // A revisited set means the remaining iterations
                    // only cycle through already-collected positions.
                    if !tail_seen.insert(cur.iter().copied().collect()) {
                        break;
                    }
                    out.extend(cur.iter().copied());
                }
                out
            }
        }
    }

    fn step(&mut self, inner: &Ast, inner_id: usize, from: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &s in from {
            next.extend(self.ends(inner, inner_id, s).iter());
        }
        next
    }

    fn anchor_holds(&self, kind: AnchorKind, pos: usize) -> bool {
        match kind {
            AnchorKind::Start => pos == 0,
            AnchorKind::End => pos == self.word.len(),
            AnchorKind::WordBoundary => self.word_before(pos) != self.word_after(pos),
            AnchorKind::NotWordBoundary => self.word_before(pos) == self.word_after(pos),
        }
    }

    fn word_before(&self, pos: usize) -> bool {
        pos > 0 && is_word_byte(self.word[pos - 1] as u16)
    }

    fn word_after(&self, pos: usize) -> bool {
        pos < self.word.len() && is_word_byte(self.word[pos] as u16)
    }
}
