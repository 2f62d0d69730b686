//! A CDCL satisfiability solver.
//!
//! Standard architecture: two-watched-literal propagation, first-UIP
//! conflict analysis with deep clause minimization, activity-driven
//! decisions, saved phases, Luby restarts, and periodic forgetting of
//! cold learnt clauses.  Incremental use is supported through monotone
//! clause addition and solving under assumptions; failed assumption
//! sets come back as a core.  No preprocessing — clauses go in as
//! given.  Everything is deterministic: same clauses, same answer,
//! same model.

use std::ops::Not;

pub type Var = u32;

/// A literal: variable and sign packed as `var << 1 | negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    pub fn pos(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn neg(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatResult {
    Sat,
    Unsat,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

type CRef = usize;

#[derive(Clone, Copy)]
struct Watcher {
    cref: CRef,
    /// Some other literal of the clause; if it is already true the
    /// clause needs no attention.
    blocker: Lit,
}

/// Binary max-heap over variable activities with position tracking, so
/// membership tests and reheapification on bumps stay cheap.
#[derive(Default)]
struct VarOrder {
    heap: Vec<Var>,
    pos: Vec<i32>,
}

impl VarOrder {
    fn push_var(&mut self) {
        self.pos.push(-1);
    }

    fn contains(&self, v: Var) -> bool {
        self.pos[v as usize] >= 0
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len() as i32;
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: Var, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v as usize] as usize, act);
        }
    }

    fn pop_max(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    /// Ties break toward the smaller variable index, keeping the solver
    /// deterministic under equal activities.
    fn before(a: Var, b: Var, act: &[f64]) -> bool {
        let (aa, ab) = (act[a as usize], act[b as usize]);
        aa > ab || (aa == ab && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::before(self.heap[i], self.heap[parent], act) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && Self::before(self.heap[l], self.heap[best], act) {
                best = l;
            }
            if r < self.heap.len() && Self::before(self.heap[r], self.heap[best], act) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i] as usize] = i as i32;
        self.pos[self.heap[j] as usize] = j as i32;
    }
}

pub struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<LBool>,
    phase: Vec<bool>,
    reason: Vec<Option<CRef>>,
    level: Vec<u32>,
    activity: Vec<f64>,
    order: VarOrder,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    /// Scratch for conflict analysis.
    seen: Vec<u8>,
    to_clear: Vec<Lit>,
    /// False once a top-level conflict makes the problem hopeless.
    ok: bool,
    model: Vec<bool>,
    core: Vec<Lit>,
    assumptions: Vec<Lit>,
    var_inc: f64,
    cla_inc: f64,
    num_learnts: usize,
    max_learnts: f64,
    pub conflicts: u64,
}

const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f64 = 0.999;
const RESTART_BASE: u64 = 100;

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assign: Vec::new(),
            phase: Vec::new(),
            reason: Vec::new(),
            level: Vec::new(),
            activity: Vec::new(),
            order: VarOrder::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: Vec::new(),
            to_clear: Vec::new(),
            ok: true,
            model: Vec::new(),
            core: Vec::new(),
            assumptions: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            num_learnts: 0,
            max_learnts: 0.0,
            conflicts: 0,
        }
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assign.len() as Var;
        self.assign.push(LBool::Undef);
        self.phase.push(false);
        self.reason.push(None);
        self.level.push(0);
        self.activity.push(0.0);
        self.seen.push(0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.push_var();
        self.order.insert(v, &self.activity);
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len()
    }

    pub fn is_ok(&self) -> bool {
        self.ok
    }

    fn value(&self, l: Lit) -> LBool {
        match self.assign[l.var() as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if l.is_neg() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
            LBool::False => {
                if l.is_neg() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause, simplifying against the top level.  Returns false
    /// if the solver became trivially unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut cl: Vec<Lit> = lits.to_vec();
        cl.sort_unstable();
        cl.dedup();
        let mut write = 0;
        for i in 0..cl.len() {
            let l = cl[i];
            if i + 1 < cl.len() && cl[i + 1] == !l {
                return true; // tautology
            }
            match self.value(l) {
                LBool::True => return true, // already satisfied at top level
                LBool::False => {}          // drop the literal
                LBool::Undef => {
                    cl[write] = l;
                    write += 1;
                }
            }
        }
        cl.truncate(write);
        match cl.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(cl[0], None);
                self.ok = self.propagate().is_none();
                self.ok
            }
            _ => {
                self.attach(cl, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        debug_assert!(lits.len() >= 2);
        let cref = self.clauses.len();
        self.watches[(!lits[0]).index()].push(Watcher { cref, blocker: lits[1] });
        self.watches[(!lits[1]).index()].push(Watcher { cref, blocker: lits[0] });
        if learnt {
            self.num_learnts += 1;
        }
        self.clauses.push(Clause { lits, learnt, deleted: false, activity: 0.0 });
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<CRef>) {
        debug_assert_eq!(self.value(l), LBool::Undef);
        let v = l.var() as usize;
        self.assign[v] = if l.is_neg() { LBool::False } else { LBool::True };
        self.reason[v] = reason;
        self.level[v] = self.decision_level();
        self.trail.push(l);
    }

    /// Unit propagation; returns the conflicting clause if any.
    fn propagate(&mut self) -> Option<CRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut keep = 0;
            let mut conflict = None;
            'watchers: for wi in 0..ws.len() {
                let w = ws[wi];
                if self.value(w.blocker) == LBool::True {
                    ws[keep] = w;
                    keep += 1;
                    continue;
                }
                if self.clauses[w.cref].deleted {
                    continue; // drop stale watcher
                }
                // Make sure the false literal sits in slot 1.
                let cl = &mut self.clauses[w.cref];
                if cl.lits[0] == !p {
                    cl.lits.swap(0, 1);
                }
                debug_assert_eq!(cl.lits[1], !p);
                let first = cl.lits[0];
                if first != w.blocker && self.value(first) == LBool::True {
                    ws[keep] = Watcher { cref: w.cref, blocker: first };
                    keep += 1;
                    continue;
                }
                // Hunt for a new literal to watch.
                for i in 2..self.clauses[w.cref].lits.len() {
                    if self.value(self.clauses[w.cref].lits[i]) != LBool::False {
                        self.clauses[w.cref].lits.swap(1, i);
                        let nw = self.clauses[w.cref].lits[1];
                        self.watches[(!nw).index()]
                            .push(Watcher { cref: w.cref, blocker: first });
                        continue 'watchers;
                    }
                }
                // Unit or conflicting.
                ws[keep] = w;
                keep += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(w.cref);
                    // Keep the remaining watchers and stop scanning.
                    for wj in wi + 1..ws.len() {
                        ws[keep] = ws[wj];
                        keep += 1;
                    }
                    self.qhead = self.trail.len();
                    break;
                }
                self.enqueue(first, Some(w.cref));
            }
            ws.truncate(keep);
            self.watches[p.index()] = ws;
            if let Some(c) = conflict {
                return Some(c);
            }
        }
        None
    }

    fn cancel_until(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let end = self.trail_lim[target as usize];
        for i in (end..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.phase[v] = !l.is_neg();
            self.assign[v] = LBool::Undef;
            self.reason[v] = None;
            self.order.insert(l.var(), &self.activity);
        }
        self.trail.truncate(end);
        self.trail_lim.truncate(target as usize);
        self.qhead = self.trail.len();
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        if !self.clauses[cref].learnt {
            return;
        }
        self.clauses[cref].activity += self.cla_inc;
        if self.clauses[cref].activity > 1e20 {
            for c in &mut self.clauses {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP learning; returns the learnt clause (asserting literal
    /// first) and the level to jump back to.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit(0)];
        let mut path = 0u32;
        let mut idx = self.trail.len();
        let mut expanding: Option<Lit> = None;
        loop {
            self.bump_clause(confl);
            let skip = usize::from(expanding.is_some());
            for i in skip..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[i];
                let v = q.var() as usize;
                if self.seen[v] == 0 && self.level[v] > 0 {
                    self.seen[v] = 1;
                    self.bump_var(q.var());
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] != 0 {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var() as usize] = 0;
            path -= 1;
            if path == 0 {
                learnt[0] = !p;
                break;
            }
            expanding = Some(p);
            confl = self.reason[p.var() as usize].expect("propagated literal has a reason");
        }

        // Minimize: drop literals implied by the rest of the clause.
        self.to_clear.clear();
        self.to_clear.extend_from_slice(&learnt);
        let mut abstract_levels = 0u32;
        for &l in &learnt[1..] {
            abstract_levels |= 1 << (self.level[l.var() as usize] & 31);
        }
        let mut write = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            let keep = self.reason[l.var() as usize].is_none()
                || !self.lit_redundant(l, abstract_levels);
            if keep {
                learnt[write] = l;
                write += 1;
            }
        }
        learnt.truncate(write);
        for i in 0..self.to_clear.len() {
            self.seen[self.to_clear[i].var() as usize] = 0;
        }

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        (learnt, bt)
    }

    /// Is `p` implied by seen literals through reasons within the
    /// clause's levels?  Used by minimization.
    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        let top = self.to_clear.len();
        let mut stack = vec![p];
        while let Some(l) = stack.pop() {
            let cref = self.reason[l.var() as usize].expect("checked before push");
            let n = self.clauses[cref].lits.len();
            for i in 1..n {
                let q = self.clauses[cref].lits[i];
                let v = q.var() as usize;
                if self.seen[v] != 0 || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v].is_none()
                    || (1u32 << (self.level[v] & 31)) & abstract_levels == 0
                {
                    for j in top..self.to_clear.len() {
                        self.seen[self.to_clear[j].var() as usize] = 0;
                    }
                    self.to_clear.truncate(top);
                    return false;
                }
                self.seen[v] = 1;
                self.to_clear.push(q);
                stack.push(q);
            }
        }
        true
    }

    /// Which assumptions force the conflict: start from a literal that
    /// is false under the current trail and follow reasons down to
    /// assumption decisions.
    fn analyze_final(&mut self, failed: Lit) -> Vec<Lit> {
        let mut core = vec![failed];
        if self.decision_level() == 0 {
            return core;
        }
        self.seen[failed.var() as usize] = 1;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            if self.seen[v] == 0 {
                continue;
            }
            match self.reason[v] {
                Some(cref) => {
                    for j in 1..self.clauses[cref].lits.len() {
                        let q = self.clauses[cref].lits[j];
                        if self.level[q.var() as usize] > 0 {
                            self.seen[q.var() as usize] = 1;
                        }
                    }
                }
                None => core.push(l),
            }
            self.seen[v] = 0;
        }
        self.seen[failed.var() as usize] = 0;
        core
    }

    fn reduce_db(&mut self) {
        let mut learnts: Vec<CRef> = (0..self.clauses.len())
            .filter(|&c| {
                let cl = &self.clauses[c];
                cl.learnt && !cl.deleted && cl.lits.len() > 2 && !self.locked(c)
            })
            .collect();
        learnts.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .partial_cmp(&self.clauses[b].activity)
                .unwrap()
                .then(b.cmp(&a))
        });
        for &c in learnts.iter().take(learnts.len() / 2) {
            self.clauses[c].deleted = true;
            self.num_learnts -= 1;
        }
    }

    fn locked(&self, cref: CRef) -> bool {
        let first = self.clauses[cref].lits[0];
        self.value(first) == LBool::True && self.reason[first.var() as usize] == Some(cref)
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.order.pop_max(&self.activity) {
            if self.assign[v as usize] == LBool::Undef {
                return Some(Lit::new(v, !self.phase[v as usize]));
            }
        }
        None
    }

    pub fn solve(&mut self) -> SatResult {
        self.solve_assuming(&[])
    }

    /// After `Unsat`, [`Solver::core`] names the subset of assumptions
    /// that cannot hold together.  After `Sat`, [`Solver::model_value`]
    /// reads the satisfying assignment.
    pub fn solve_assuming(&mut self, assumptions: &[Lit]) -> SatResult {
        self.cancel_until(0);
        self.core.clear();
        if !self.ok {
            return SatResult::Unsat;
        }
        self.assumptions = assumptions.to_vec();
        if self.max_learnts == 0.0 {
            self.max_learnts = (self.clauses.len() as f64 / 3.0).max(1000.0);
        }
        let mut restarts = 0u64;
        loop {
            let budget = RESTART_BASE * luby(restarts);
            match self.search(budget) {
                Some(r) => {
                    self.cancel_until(0);
                    return r;
                }
                None => {
                    restarts += 1;
                    self.max_learnts *= 1.05;
                }
            }
        }
    }

    /// Runs CDCL until an answer or `budget` conflicts (then `None`,
    /// signalling a restart).
    fn search(&mut self, budget: u64) -> Option<SatResult> {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(SatResult::Unsat);
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                let asserting = learnt[0];
                if learnt.len() == 1 {
                    self.enqueue(asserting, None);
                } else {
                    let cref = self.attach(learnt, true);
                    self.bump_clause(cref);
                    self.enqueue(asserting, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLA_DECAY;
                continue;
            }
            if conflicts_here >= budget {
                self.cancel_until(0);
                return None;
            }
            if self.num_learnts as f64 >= self.max_learnts {
                self.reduce_db();
            }
            let dl = self.decision_level() as usize;
            if dl < self.assumptions.len() {
                let p = self.assumptions[dl];
                match self.value(p) {
                    LBool::True => {
                        // Already holds; open a dummy level to keep the
                        // level↔assumption correspondence.
                        self.trail_lim.push(self.trail.len());
                    }
                    LBool::False => {
                        self.core = self.analyze_final(p);
                        return Some(SatResult::Unsat);
                    }
                    LBool::Undef => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(p, None);
                    }
                }
                continue;
            }
            match self.pick_branch() {
                None => {
                    self.model = self
                        .assign
                        .iter()
                        .map(|&a| a == LBool::True)
                        .collect();
                    return Some(SatResult::Sat);
                }
                Some(p) => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(p, None);
                }
            }
        }
    }

    pub fn model_value(&self, v: Var) -> bool {
        self.model[v as usize]
    }

    /// Truth of a literal in the last model.
    pub fn model_lit(&self, l: Lit) -> bool {
        self.model_value(l.var()) != l.is_neg()
    }

    /// The failed assumptions from the last `Unsat` answer under
    /// assumptions (a subset of what was passed, possibly reordered).
    pub fn core(&self) -> &[Lit] {
        &self.core
    }
}

/// The Luby restart sequence 1,1,2,1,1,2,4,…
fn luby(i: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i;
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}
