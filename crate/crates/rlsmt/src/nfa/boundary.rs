//! Guards on zero-width and consuming transitions.
//!
//! A guard is a Boolean combination of atoms `sym(offset) ∈ S` where the
//! offset selects a symbol near the current gap in the word: `-1` is the
//! symbol just consumed and `0` the one about to be consumed.  Start and
//! end anchors become tests against the padding marks, word boundaries a
//! parity test on word-character membership at the two offsets.
//! Reversal maps offset `o` to `-1-o`, which swaps the two.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::symbols::{is_word_byte, RangeSet, Symbol, MAX_SYMBOL, SIGMA_END, SIGMA_START};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPred(Arc<Expr>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Expr {
    Const(bool),
    /// Symbol at `offset` relative to the gap lies in `set`.
    Atom { offset: i8, set: RangeSet },
    Not(BoundaryPred),
    And(Vec<BoundaryPred>),
    Or(Vec<BoundaryPred>),
}

impl BoundaryPred {
    pub fn tt() -> Self {
        BoundaryPred(Arc::new(Expr::Const(true)))
    }

    pub fn ff() -> Self {
        BoundaryPred(Arc::new(Expr::Const(false)))
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::tt()
        } else {
            Self::ff()
        }
    }

    pub fn atom(offset: i8, set: RangeSet) -> Self {
        debug_assert!(offset == -1 || offset == 0, "guard horizon is two symbols");
        if set.is_empty() {
            return Self::ff();
        }
        if set.count() == MAX_SYMBOL as usize + 1 {
            return Self::tt();
        }
        BoundaryPred(Arc::new(Expr::Atom { offset, set }))
    }

    /// Guard for a start anchor: the previous symbol is the start mark.
    pub fn start_anchor() -> Self {
        Self::atom(-1, RangeSet::singleton(SIGMA_START))
    }

    /// Guard for an end anchor: the next symbol is the end mark.
    pub fn end_anchor() -> Self {
        Self::atom(0, RangeSet::singleton(SIGMA_END))
    }

    /// Word-boundary guard: word-ness flips across the gap.  The padding
    /// marks count as non-word symbols.
    pub fn word_boundary() -> Self {
        let before = Self::atom(-1, word_symbols());
        let after = Self::atom(0, word_symbols());
        Self::or(vec![
            Self::and(vec![before.clone(), after.clone().negate()]),
            Self::and(vec![before.negate(), after]),
        ])
    }

    pub fn not_word_boundary() -> Self {
        Self::word_boundary().negate()
    }

    pub fn negate(self) -> Self {
        match &*self.0 {
            Expr::Const(v) => Self::constant(!v),
            Expr::Not(inner) => inner.clone(),
            _ => BoundaryPred(Arc::new(Expr::Not(self))),
        }
    }

    /// Conjunction, flattened, sorted, and deduplicated so that equal
    /// guard sets built in different orders compare equal.  The closure
    /// computation during epsilon elimination relies on that to detect
    /// repeats.
    pub fn and(parts: Vec<BoundaryPred>) -> Self {
        Self::junction(parts, true)
    }

    pub fn or(parts: Vec<BoundaryPred>) -> Self {
        Self::junction(parts, false)
    }

    pub fn and2(a: BoundaryPred, b: BoundaryPred) -> Self {
        Self::and(vec![a, b])
    }

    fn junction(parts: Vec<BoundaryPred>, conjunction: bool) -> Self {
        let absorbing = Expr::Const(!conjunction);
        let mut flat: Vec<BoundaryPred> = Vec::new();
        let mut stack: Vec<BoundaryPred> = parts.into_iter().rev().collect();
        while let Some(p) = stack.pop() {
            match &*p.0 {
                Expr::Const(v) if *v == conjunction => {}
                Expr::Const(_) => return BoundaryPred(Arc::new(absorbing)),
                Expr::And(kids) if conjunction => stack.extend(kids.iter().rev().cloned()),
                Expr::Or(kids) if !conjunction => stack.extend(kids.iter().rev().cloned()),
                _ => flat.push(p),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Self::constant(conjunction),
            1 => flat.pop().unwrap(),
            _ => BoundaryPred(Arc::new(if conjunction {
                Expr::And(flat)
            } else {
                Expr::Or(flat)
            })),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(&*self.0, Expr::Const(true))
    }

    pub fn is_false(&self) -> bool {
        matches!(&*self.0, Expr::Const(false))
    }

    /// Evaluates the guard at a gap with `prev` just consumed and `cur`
    /// up next.
    pub fn eval(&self, prev: Symbol, cur: Symbol) -> bool {
        match &*self.0 {
            Expr::Const(v) => *v,
            Expr::Atom { offset, set } => {
                let sym = if *offset == -1 { prev } else { cur };
                set.contains(sym)
            }
            Expr::Not(inner) => !inner.eval(prev, cur),
            Expr::And(kids) => kids.iter().all(|k| k.eval(prev, cur)),
            Expr::Or(kids) => kids.iter().any(|k| k.eval(prev, cur)),
        }
    }

    /// Swaps the two offsets; used when an automaton is reversed and
    /// "just consumed" and "up next" trade places.
    pub fn flip_offsets(&self) -> Self {
        match &*self.0 {
            Expr::Const(_) => self.clone(),
            Expr::Atom { offset, set } => Self::atom(-1 - offset, set.clone()),
            Expr::Not(inner) => inner.flip_offsets().negate(),
            Expr::And(kids) => Self::and(kids.iter().map(Self::flip_offsets).collect()),
            Expr::Or(kids) => Self::or(kids.iter().map(Self::flip_offsets).collect()),
        }
    }

    /// Representative symbols that distinguish every atom at `offset`:
    /// one per interval of the partition induced by the atom sets.  Any
    /// two symbols in the same interval are indistinguishable to the
    /// guard, so quantifying over representatives is exact.
    pub fn representatives(&self, offset: i8) -> Vec<Symbol> {
        let mut cuts = BTreeSet::from([0]);
        self.collect_cuts(offset, &mut cuts);
        cuts.into_iter().filter(|&c| c <= MAX_SYMBOL).collect()
    }

    fn collect_cuts(&self, offset: i8, cuts: &mut BTreeSet<Symbol>) {
        match &*self.0 {
            Expr::Const(_) => {}
            Expr::Atom { offset: o, set } => {
                if *o == offset {
                    for &(lo, hi) in set.ranges() {
                        cuts.insert(lo);
                        if hi < MAX_SYMBOL {
                            cuts.insert(hi + 1);
                        }
                    }
                }
            }
            Expr::Not(inner) => inner.collect_cuts(offset, cuts),
            Expr::And(kids) | Expr::Or(kids) => {
                for k in kids {
                    k.collect_cuts(offset, cuts);
                }
            }
        }
    }

    /// Exact projection onto the consumed symbol: the set of `cur` for
    /// which some `prev` satisfies the guard.
    pub fn project_cur(&self) -> RangeSet {
        let prev_reps = self.representatives(-1);
        let mut cuts = BTreeSet::from([0]);
        self.collect_cuts(0, &mut cuts);
        let mut boundaries: Vec<Symbol> = cuts.into_iter().filter(|&c| c <= MAX_SYMBOL).collect();
        boundaries.push(MAX_SYMBOL + 1);
        let mut ranges = Vec::new();
        for w in boundaries.windows(2) {
            let (lo, next) = (w[0], w[1]);
            if prev_reps.iter().any(|&p| self.eval(p, lo)) {
                ranges.push((lo, next - 1));
            }
        }
        RangeSet::from_ranges(ranges)
    }

    /// Whether any `(prev, cur)` symbol pair satisfies the guard.
    pub fn satisfiable(&self) -> bool {
        let cur_reps = self.representatives(0);
        self.representatives(-1)
            .iter()
            .any(|&p| cur_reps.iter().any(|&c| self.eval(p, c)))
    }

    /// Rebuilds the guard inside a formula arena; `atom_fn` supplies
    /// the encoding of each atom.
    pub fn to_formula(
        &self,
        arena: &mut crate::logic::Arena,
        atom_fn: &mut dyn FnMut(&mut crate::logic::Arena, i8, &RangeSet) -> crate::logic::FormulaId,
    ) -> crate::logic::FormulaId {
        match &*self.0 {
            Expr::Const(v) => arena.constant(*v),
            Expr::Atom { offset, set } => atom_fn(arena, *offset, set),
            Expr::Not(inner) => {
                let t = inner.to_formula(arena, atom_fn);
                arena.not(t)
            }
            Expr::And(kids) => {
                let ts: Vec<_> = kids.iter().map(|k| k.to_formula(arena, atom_fn)).collect();
                arena.and(ts)
            }
            Expr::Or(kids) => {
                let ts: Vec<_> = kids.iter().map(|k| k.to_formula(arena, atom_fn)).collect();
                arena.or(ts)
            }
        }
    }
}

fn word_symbols() -> RangeSet {
    let mut ranges = Vec::new();
    let mut lo: Option<Symbol> = None;
    for b in 0u16..=255 {
        if is_word_byte(b) {
            if lo.is_none() {
                lo = Some(b);
            }
        } else if let Some(l) = lo.take() {
            ranges.push((l, b - 1));
        }
    }
    if let Some(l) = lo {
        ranges.push((l, 255));
    }
    RangeSet::from_ranges(ranges)
}

impl fmt::Display for BoundaryPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Atom { offset, set } => write!(f, "sym({offset}) in {set}"),
            Expr::Not(inner) => write!(f, "!({inner})"),
            Expr::And(kids) => {
                write!(f, "(")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
            Expr::Or(kids) => {
                write!(f, "(")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}
