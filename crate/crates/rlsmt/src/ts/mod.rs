//! Bit-level transition systems over the automaton state space.
//!
//! Latches hold one bit per automaton state plus a 9-bit history
//! register per string variable (the previously consumed symbol, reset
//! to the start mark).  Inputs supply 9 bits per variable and step —
//! the symbols consumed this step.  The question "is some padded word
//! tuple accepted" becomes "is the bad formula reachable".
//!
//! Two encodings exist:
//!
//! * **Functional** (from a reversed automaton): each latch has a reset
//!   value and a next-state formula over current latches and inputs.
//!   State bits start at the accepting flags — reversal made those the
//!   original initial states — and track which original states can be
//!   reached while consuming the forward word; the bad formula is the
//!   automaton's initial formula over the latches.  Deterministic, so
//!   both bounded search and inductive unreachability proofs apply.
//! * **Relational** (from a forward automaton): a step relation ties
//!   each current state bit to an alternative firing into the *next*
//!   state bits, mirroring the backward evaluation of acceptance, and
//!   the bad formula demands exactly the accepting assignment.  Only
//!   bounded search can use this shape.

pub mod aiger;

use crate::bfa::Bfa;
use crate::logic::{Arena, FormulaId};
use crate::symbols::{RangeSet, Symbol, SIGMA_START, SYMBOL_BITS};

/// Variable namespaces inside a transition-system arena, packed into
/// the upper bits of the arena variable index.
const TAG_SHIFT: u32 = 28;
const TAG_LATCH: u32 = 0;
const TAG_INPUT: u32 = 1;
const TAG_NEXT: u32 = 2;

pub fn latch_var(i: usize) -> u32 {
    (TAG_LATCH << TAG_SHIFT) | i as u32
}

pub fn input_var(i: usize) -> u32 {
    (TAG_INPUT << TAG_SHIFT) | i as u32
}

pub fn next_latch_var(i: usize) -> u32 {
    (TAG_NEXT << TAG_SHIFT) | i as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsVar {
    Latch(usize),
    Input(usize),
    NextLatch(usize),
}

pub fn unpack_var(v: u32) -> TsVar {
    let idx = (v & ((1 << TAG_SHIFT) - 1)) as usize;
    match v >> TAG_SHIFT {
        TAG_LATCH => TsVar::Latch(idx),
        TAG_INPUT => TsVar::Input(idx),
        TAG_NEXT => TsVar::NextLatch(idx),
        _ => unreachable!("unknown variable tag"),
    }
}

#[derive(Debug, Clone)]
pub enum TsKind {
    Functional {
        /// Reset value per latch.
        resets: Vec<bool>,
        /// Next-state formula per latch, over latch and input variables.
        nexts: Vec<FormulaId>,
    },
    Relational {
        /// Over latch variables.
        init: FormulaId,
        /// Over latch, input, and next-latch variables.
        step: FormulaId,
    },
}

#[derive(Debug, Clone)]
pub struct TransitionSystem {
    pub arena: Arena,
    /// Automaton state bits; latches `0..num_state_bits`.
    pub num_state_bits: usize,
    /// String variables; registers occupy latches
    /// `num_state_bits + v*SYMBOL_BITS + bit`.
    pub num_vars: usize,
    /// Over latch variables.
    pub bad: FormulaId,
    pub kind: TsKind,
    /// Per variable, one representative symbol per equivalence class of
    /// the symbol predicates occurring anywhere in the automaton;
    /// symbols in a class are interchangeable everywhere.  Lets
    /// explicit-state search quotient the input alphabet.
    pub input_classes: Vec<Vec<Symbol>>,
}

impl TransitionSystem {
    pub fn num_latches(&self) -> usize {
        self.num_state_bits + SYMBOL_BITS * self.num_vars
    }

    pub fn num_inputs(&self) -> usize {
        SYMBOL_BITS * self.num_vars
    }

    pub fn is_functional(&self) -> bool {
        matches!(self.kind, TsKind::Functional { .. })
    }

    /// Encodes a compiled automaton.  Direction picks the shape.
    pub fn encode(bfa: &Bfa) -> TransitionSystem {
        if bfa.reversed {
            encode_functional(bfa)
        } else {
            encode_relational(bfa)
        }
    }

    pub fn initial_latches(&self) -> Vec<bool> {
        match &self.kind {
            TsKind::Functional { resets, .. } => resets.clone(),
            TsKind::Relational { .. } => {
                panic!("relational systems have no unique initial state")
            }
        }
    }

    /// One functional step: next latch values from current latches and
    /// input bits.
    pub fn simulate_step(&self, latches: &[bool], inputs: &[bool]) -> Vec<bool> {
        let TsKind::Functional { nexts, .. } = &self.kind else {
            panic!("cannot simulate a relational system");
        };
        debug_assert_eq!(latches.len(), self.num_latches());
        debug_assert_eq!(inputs.len(), self.num_inputs());
        nexts
            .iter()
            .map(|&f| {
                self.arena.eval(f, &|v| match unpack_var(v) {
                    TsVar::Latch(i) => latches[i],
                    TsVar::Input(i) => inputs[i],
                    TsVar::NextLatch(_) => unreachable!("next in functional formula"),
                })
            })
            .collect()
    }

    pub fn bad_at(&self, latches: &[bool]) -> bool {
        self.arena.eval(self.bad, &|v| match unpack_var(v) {
            TsVar::Latch(i) => latches[i],
            _ => unreachable!("bad reads latches only"),
        })
    }

    /// The symbol a step consumed for variable `var`, read off the
    /// step's input bits (least significant first).
    pub fn input_symbol(&self, inputs: &[bool], var: usize) -> Symbol {
        let mut sym = 0u16;
        for bit in (0..SYMBOL_BITS).rev() {
            sym = (sym << 1) | inputs[var * SYMBOL_BITS + bit] as u16;
        }
        sym
    }

    /// Input bit pattern consuming `sym` for each variable.
    pub fn inputs_for_symbols(&self, syms: &[Symbol]) -> Vec<bool> {
        assert_eq!(syms.len(), self.num_vars);
        let mut inputs = vec![false; self.num_inputs()];
        for (v, &sym) in syms.iter().enumerate() {
            for bit in 0..SYMBOL_BITS {
                inputs[v * SYMBOL_BITS + bit] = (sym >> bit) & 1 == 1;
            }
        }
        inputs
    }
}

/// Comparator circuit: value of `bits` (LSB first) lies in `set`.
/// Exact over the whole 2^9 space, so symbols past the end mark fall
/// outside every set.
fn range_circuit(arena: &mut Arena, bits: &[FormulaId], set: &RangeSet) -> FormulaId {
    let parts: Vec<FormulaId> = set
        .ranges()
        .iter()
        .map(|&(lo, hi)| {
            if lo == hi {
                equals_circuit(arena, bits, lo)
            } else {
                let ge = compare_circuit(arena, bits, lo, true);
                let le = compare_circuit(arena, bits, hi, false);
                arena.and2(ge, le)
            }
        })
        .collect();
    arena.or(parts)
}

fn equals_circuit(arena: &mut Arena, bits: &[FormulaId], value: Symbol) -> FormulaId {
    let lits: Vec<FormulaId> = bits
        .iter()
        .enumerate()
        .map(|(i, &b)| if (value >> i) & 1 == 1 { b } else { arena.not(b) })
        .collect();
    arena.and(lits)
}

/// `value-of-bits >= bound` when `ge`, else `<= bound`; folds the
/// bits upward from the least significant.
fn compare_circuit(arena: &mut Arena, bits: &[FormulaId], bound: Symbol, ge: bool) -> FormulaId {
    let mut acc = arena.tt();
    for i in 0..bits.len() {
        let b = bits[i];
        let bound_bit = (bound >> i) & 1 == 1;
        // acc compares the strictly lower bits; fold in bit i.
        acc = match (ge, bound_bit) {
            (true, true) => arena.and2(b, acc),
            (true, false) => arena.or2(b, acc),
            (false, true) => {
                let nb = arena.not(b);
                arena.or2(nb, acc)
            }
            (false, false) => {
                let nb = arena.not(b);
                arena.and2(nb, acc)
            }
        };
    }
    acc
}

struct Encoder<'a> {
    bfa: &'a Bfa,
    arena: Arena,
    /// Latch variables for the per-variable history registers.
    reg_bits: Vec<Vec<FormulaId>>,
    input_bits: Vec<Vec<FormulaId>>,
}

impl<'a> Encoder<'a> {
    fn new(bfa: &'a Bfa) -> Self {
        let mut arena = Arena::new();
        let num_states = bfa.states.len();
        let reg_bits = (0..bfa.num_vars)
            .map(|v| {
                (0..SYMBOL_BITS)
                    .map(|b| arena.var(latch_var(num_states + v * SYMBOL_BITS + b)))
                    .collect()
            })
            .collect();
        let input_bits = (0..bfa.num_vars)
            .map(|v| {
                (0..SYMBOL_BITS).map(|b| arena.var(input_var(v * SYMBOL_BITS + b))).collect()
            })
            .collect();
        Encoder { bfa, arena, reg_bits, input_bits }
    }

    /// Copies a formula over automaton states into the arena, mapping
    /// state `q` through `state_var`.
    fn import(&mut self, roots: &[FormulaId], state_var: fn(usize) -> u32) -> Vec<FormulaId> {
        self.bfa.arena.copy_into(roots, &mut self.arena, &|ar, q| {
            ar.var(state_var(q as usize))
        })
    }

    /// Circuit for one transition alternative of state `q`, with the
    /// target formula already imported.  `crossed` binds the guard's
    /// "up next" offset to the history register and "just consumed" to
    /// the input — the reading reversal calls for.
    fn alt_circuit(
        &mut self,
        var: usize,
        ranges: &RangeSet,
        guard: &crate::nfa::BoundaryPred,
        target: FormulaId,
        crossed: bool,
    ) -> FormulaId {
        let input_bits = self.input_bits[var].clone();
        let reg_bits = self.reg_bits[var].clone();
        let pred = range_circuit(&mut self.arena, &input_bits, ranges);
        let guard_f = guard.to_formula(&mut self.arena, &mut |arena, offset, set| {
            let bits = match (offset, crossed) {
                (-1, false) | (0, true) => &reg_bits,
                (0, false) | (-1, true) => &input_bits,
                _ => unreachable!("guard horizon is two symbols"),
            };
            range_circuit(arena, bits, set)
        });
        self.arena.and(vec![pred, guard_f, target])
    }
}

/// Functional shape from a reversed automaton.
fn encode_functional(bfa: &Bfa) -> TransitionSystem {
    assert!(bfa.reversed, "functional encoding takes a reversed automaton");
    let num_states = bfa.states.len();
    let mut enc = Encoder::new(bfa);

    // Targets read *current* state bits: the stored alternatives are
    // original edges into the state, so the state bit advances from the
    // bits of original predecessors.
    let target_roots: Vec<FormulaId> =
        bfa.delta.iter().flatten().map(|alt| alt.target).collect();
    let mut imported = enc.import(&target_roots, latch_var).into_iter();
    let mut nexts: Vec<FormulaId> = Vec::with_capacity(num_states);
    for (q, alts) in bfa.delta.iter().enumerate() {
        let var = bfa.states[q].var;
        let fires: Vec<FormulaId> = alts
            .iter()
            .map(|alt| {
                let target = imported.next().unwrap();
                enc.alt_circuit(var, &alt.ranges, &alt.guard, target, true)
            })
            .collect();
        let next = enc.arena.or(fires);
        nexts.push(next);
    }
    // Registers latch the input.
    for v in 0..bfa.num_vars {
        for b in 0..SYMBOL_BITS {
            nexts.push(enc.arena.var(input_var(v * SYMBOL_BITS + b)));
        }
    }

    let mut resets: Vec<bool> = bfa.states.iter().map(|s| s.accepting).collect();
    for _ in 0..bfa.num_vars {
        for b in 0..SYMBOL_BITS {
            resets.push((SIGMA_START >> b) & 1 == 1);
        }
    }

    let bad = enc.import(&[bfa.init], latch_var)[0];
    let input_classes = input_class_representatives(bfa);
    TransitionSystem {
        arena: enc.arena,
        num_state_bits: num_states,
        num_vars: bfa.num_vars,
        bad,
        kind: TsKind::Functional { resets, nexts },
        input_classes,
    }
}

/// Relational shape from a forward automaton.
fn encode_relational(bfa: &Bfa) -> TransitionSystem {
    assert!(!bfa.reversed, "relational encoding takes a forward automaton");
    let num_states = bfa.states.len();
    let mut enc = Encoder::new(bfa);

    // Init: the automaton's initial formula over current state bits,
    // registers at the start mark.
    let mut init_parts = vec![enc.import(&[bfa.init], latch_var)[0]];
    for v in 0..bfa.num_vars {
        for b in 0..SYMBOL_BITS {
            let bit = enc.reg_bits[v][b];
            let want = (SIGMA_START >> b) & 1 == 1;
            init_parts.push(if want { bit } else { enc.arena.not(bit) });
        }
    }
    let init = enc.arena.and(init_parts);

    // Step: each current state bit mirrors acceptance pulled backward —
    // it holds iff some alternative fires now into targets over the
    // next state bits.
    let target_roots: Vec<FormulaId> =
        bfa.delta.iter().flatten().map(|alt| alt.target).collect();
    let mut imported = enc.import(&target_roots, next_latch_var).into_iter();
    let mut step_parts: Vec<FormulaId> = Vec::new();
    for (q, alts) in bfa.delta.iter().enumerate() {
        let var = bfa.states[q].var;
        let fires: Vec<FormulaId> = alts
            .iter()
            .map(|alt| {
                let target = imported.next().unwrap();
                enc.alt_circuit(var, &alt.ranges, &alt.guard, target, false)
            })
            .collect();
        let fired = enc.arena.or(fires);
        let cur = enc.arena.var(latch_var(q));
        let iff = enc.arena.iff(cur, fired);
        step_parts.push(iff);
    }
    // Registers latch the input.
    for v in 0..bfa.num_vars {
        for b in 0..SYMBOL_BITS {
            let next_reg = enc.arena.var(next_latch_var(num_states + v * SYMBOL_BITS + b));
            let input = enc.arena.var(input_var(v * SYMBOL_BITS + b));
            let iff = enc.arena.iff(next_reg, input);
            step_parts.push(iff);
        }
    }
    let step = enc.arena.and(step_parts);

    // Bad: exactly the accepting assignment, the backward evaluation's
    // seed.
    let bad_lits: Vec<FormulaId> = (0..num_states)
        .map(|q| {
            let bit = enc.arena.var(latch_var(q));
            if bfa.states[q].accepting {
                bit
            } else {
                enc.arena.not(bit)
            }
        })
        .collect();
    let bad = enc.arena.and(bad_lits);

    let input_classes = input_class_representatives(bfa);
    TransitionSystem {
        arena: enc.arena,
        num_state_bits: num_states,
        num_vars: bfa.num_vars,
        bad,
        kind: TsKind::Relational { init, step },
        input_classes,
    }
}

/// Partitions each variable's symbol space by every range set occurring
/// in its states' alternatives (symbol predicates and guard atoms
/// alike) and returns one representative per block.  Two symbols in a
/// block drive identical transitions everywhere, so searches may
/// restrict inputs to representatives without losing reachability.
fn input_class_representatives(bfa: &Bfa) -> Vec<Vec<Symbol>> {
    use std::collections::BTreeSet;
    let mut cuts: Vec<BTreeSet<Symbol>> = vec![BTreeSet::from([0]); bfa.num_vars];
    for (q, alts) in bfa.delta.iter().enumerate() {
        let var = bfa.states[q].var;
        for alt in alts {
            for &(lo, hi) in alt.ranges.ranges() {
                cuts[var].insert(lo);
                if hi < crate::symbols::MAX_SYMBOL {
                    cuts[var].insert(hi + 1);
                }
            }
            for offset in [-1, 0] {
                for rep in alt.guard.representatives(offset) {
                    cuts[var].insert(rep);
                }
            }
        }
    }
    cuts.into_iter().map(|set| set.into_iter().collect()).collect()
}

#[cfg(test)]
mod tests;
