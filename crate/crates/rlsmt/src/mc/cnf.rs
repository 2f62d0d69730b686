//! Clausification of arena formulas.
//!
//! The usual definitional transform: every internal connective gets a
//! fresh solver variable constrained to behave like the gate, negation
//! just flips the literal.  Equisatisfiable, and equivalent over the
//! original variables once gate variables are projected away.

use std::collections::HashMap;

use super::sat::{Lit, Solver};
use crate::logic::{Arena, FormulaId, Node};

/// Shared clausification state: one constant-true literal per solver
/// and a per-context memo so repeated subformulas reuse their gates.
///
/// A context is only valid for one (arena, variable binding) pair —
/// callers encoding the same formula under different bindings (say,
/// per unrolling frame) need one context each.
pub struct CnfCtx {
    true_lit: Lit,
    memo: HashMap<FormulaId, Lit>,
}

impl CnfCtx {
    pub fn new(solver: &mut Solver) -> CnfCtx {
        let t = Lit::pos(solver.new_var());
        solver.add_clause(&[t]);
        CnfCtx { true_lit: t, memo: HashMap::new() }
    }

    /// A shallow copy sharing the constant but no memo, for a sibling
    /// binding within the same solver.
    pub fn sibling(&self) -> CnfCtx {
        CnfCtx { true_lit: self.true_lit, memo: HashMap::new() }
    }

    pub fn true_lit(&self) -> Lit {
        self.true_lit
    }

    /// Encodes `root` and returns a literal equivalent to it.  `var_map`
    /// supplies (and may lazily allocate) the solver literal for each
    /// arena variable.
    pub fn encode(
        &mut self,
        arena: &Arena,
        root: FormulaId,
        solver: &mut Solver,
        var_map: &mut dyn FnMut(&mut Solver, u32) -> Lit,
    ) -> Lit {
        if let Some(&l) = self.memo.get(&root) {
            return l;
        }
        // Children have smaller ids: mark the cone, then translate
        // ascending.
        let n = root.index() + 1;
        let mut live = vec![false; n];
        live[root.index()] = true;
        for i in (0..n).rev() {
            if !live[i] {
                continue;
            }
            if self.memo.contains_key(&FormulaId::from_index(i)) {
                continue;
            }
            match arena.node(FormulaId::from_index(i)) {
                Node::Const(_) | Node::Var(_) => {}
                Node::Not(a) => live[a.index()] = true,
                Node::And(kids) | Node::Or(kids) => {
                    for k in kids.iter() {
                        live[k.index()] = true;
                    }
                }
            }
        }
        for i in 0..n {
            let id = FormulaId::from_index(i);
            if !live[i] || self.memo.contains_key(&id) {
                continue;
            }
            let lit = match arena.node(id) {
                Node::Const(b) => {
                    if *b {
                        self.true_lit
                    } else {
                        !self.true_lit
                    }
                }
                Node::Var(x) => var_map(solver, *x),
                Node::Not(a) => !self.memo[a],
                Node::And(kids) => {
                    let ks: Vec<Lit> = kids.iter().map(|k| self.memo[k]).collect();
                    let g = Lit::pos(solver.new_var());
                    let mut long: Vec<Lit> = ks.iter().map(|&k| !k).collect();
                    long.push(g);
                    solver.add_clause(&long);
                    for k in ks {
                        solver.add_clause(&[!g, k]);
                    }
                    g
                }
                Node::Or(kids) => {
                    let ks: Vec<Lit> = kids.iter().map(|k| self.memo[k]).collect();
                    let g = Lit::pos(solver.new_var());
                    let mut long = ks.clone();
                    long.push(!g);
                    solver.add_clause(&long);
                    for k in ks {
                        solver.add_clause(&[g, !k]);
                    }
                    g
                }
            };
            self.memo.insert(id, lit);
        }
        self.memo[&root]
    }
}

/// One copy of a functional system's step logic inside a solver:
/// fresh variables for current latches and inputs, the next-state
/// functions and the bad predicate as derived literals.
///
/// No equality chain ties `nexts` to anything — callers either assume
/// over those literals directly (inductive queries) or feed them into
/// the next unrolling frame.
pub struct StepCnf {
    pub latches: Vec<Lit>,
    pub inputs: Vec<Lit>,
    pub nexts: Vec<Lit>,
    /// Bad over the *current* latches.
    pub bad: Lit,
}

pub fn load_functional_step(ts: &crate::ts::TransitionSystem, solver: &mut Solver) -> StepCnf {
    let crate::ts::TsKind::Functional { nexts, .. } = &ts.kind else {
        panic!("step loading needs a functional system");
    };
    let latches: Vec<Lit> = (0..ts.num_latches()).map(|_| Lit::pos(solver.new_var())).collect();
    let inputs: Vec<Lit> = (0..ts.num_inputs()).map(|_| Lit::pos(solver.new_var())).collect();
    let mut ctx = CnfCtx::new(solver);
    let mut map = |_: &mut Solver, v: u32| match crate::ts::unpack_var(v) {
        crate::ts::TsVar::Latch(i) => latches[i],
        crate::ts::TsVar::Input(i) => inputs[i],
        crate::ts::TsVar::NextLatch(_) => unreachable!("functional formulas have no next vars"),
    };
    let bad = ctx.encode(&ts.arena, ts.bad, solver, &mut map);
    let nexts = nexts.iter().map(|&f| ctx.encode(&ts.arena, f, solver, &mut map)).collect();
    StepCnf { latches, inputs, nexts, bad }
}
