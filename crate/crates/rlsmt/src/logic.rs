//! Hash-consed Boolean formula DAGs.
//!
//! An [`Arena`] owns a pool of structurally deduplicated formula nodes.
//! Node ids are indices into the pool, and constructors guarantee that a
//! child id is always smaller than its parent id, so a single forward
//! sweep visits nodes in topological order.  Constructors perform light
//! constant folding (`¬¬x → x`, conjunction with `false` → `false`,
//! duplicate/complementary children collapse) so that syntactic negation
//! chains do not grow without bound.
//!
//! The interpretation of `Var(n)` is up to the client: the automaton
//! layer uses state ids, the transition-system layer packs latch/input
//! descriptors into the index.

use std::collections::HashMap;

/// Index of a formula node within its [`Arena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(u32);

impl FormulaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Inverse of [`FormulaId::index`]; only meaningful for indices
    /// that came from the same arena.
    pub fn from_index(i: usize) -> FormulaId {
        FormulaId(i as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Const(bool),
    Var(u32),
    Not(FormulaId),
    And(Box<[FormulaId]>),
    Or(Box<[FormulaId]>),
}

/// Pool of hash-consed formula nodes.
#[derive(Debug, Clone, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    dedup: HashMap<Node, FormulaId>,
}

impl Arena {
    pub fn new() -> Self {
        let mut a = Arena { nodes: Vec::new(), dedup: HashMap::new() };
        // Pin the constants to ids 0 and 1.
        a.intern(Node::Const(false));
        a.intern(Node::Const(true));
        a
    }

    pub fn ff(&self) -> FormulaId {
        FormulaId(0)
    }

    pub fn tt(&self) -> FormulaId {
        FormulaId(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: FormulaId) -> &Node {
        &self.nodes[id.index()]
    }

    fn intern(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.dedup.insert(node, id);
        id
    }

    pub fn constant(&self, value: bool) -> FormulaId {
        if value {
            self.tt()
        } else {
            self.ff()
        }
    }

    pub fn var(&mut self, index: u32) -> FormulaId {
        self.intern(Node::Var(index))
    }

    pub fn not(&mut self, id: FormulaId) -> FormulaId {
        match self.nodes[id.index()] {
            Node::Const(b) => self.constant(!b),
            Node::Not(inner) => inner,
            _ => self.intern(Node::Not(id)),
        }
    }

    pub fn and(&mut self, children: impl IntoIterator<Item = FormulaId>) -> FormulaId {
        self.nary(children, true)
    }

    pub fn or(&mut self, children: impl IntoIterator<Item = FormulaId>) -> FormulaId {
        self.nary(children, false)
    }

    pub fn and2(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        let na = self.not(a);
        self.or2(na, b)
    }

    pub fn iff(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        let both = self.and2(a, b);
        let na = self.not(a);
        let nb = self.not(b);
        let neither = self.and2(na, nb);
        self.or2(both, neither)
    }

    /// Shared n-ary constructor: `conj` selects conjunction vs disjunction.
    fn nary(&mut self, children: impl IntoIterator<Item = FormulaId>, conj: bool) -> FormulaId {
        let absorbing = self.constant(!conj); // false for And, true for Or
        let neutral = self.constant(conj);
        let mut kids: Vec<FormulaId> = Vec::new();
        for c in children {
            if c == absorbing {
                return absorbing;
            }
            if c != neutral {
                kids.push(c);
            }
        }
        kids.sort_unstable();
        kids.dedup();
        // x ∧ ¬x → false, x ∨ ¬x → true.
        for &k in &kids {
            if let Node::Not(inner) = self.nodes[k.index()] {
                if kids.binary_search(&inner).is_ok() {
                    return absorbing;
                }
            }
        }
        match kids.len() {
            0 => neutral,
            1 => kids[0],
            _ => {
                let node = if conj {
                    Node::And(kids.into_boxed_slice())
                } else {
                    Node::Or(kids.into_boxed_slice())
                };
                self.intern(node)
            }
        }
    }

    /// Evaluates `id` under a variable assignment.
    pub fn eval(&self, id: FormulaId, assign: &dyn Fn(u32) -> bool) -> bool {
        let mut cache = vec![false; id.index() + 1];
        self.eval_with(id, assign, &mut cache)
    }

    /// Evaluation with a caller-owned scratch buffer, for hot loops.
    /// The buffer is resized as needed; contents need not be cleared.
    /// Only the cone under `id` is touched, so `assign` sees exactly the
    /// variables the formula mentions.
    pub fn eval_with(
        &self,
        id: FormulaId,
        assign: &dyn Fn(u32) -> bool,
        cache: &mut Vec<bool>,
    ) -> bool {
        let n = id.index() + 1;
        cache.clear();
        cache.resize(n, false);
        // Mark the cone descending — children have smaller ids — then
        // overwrite marks with values ascending.
        cache[id.index()] = true;
        for i in (0..n).rev() {
            if !cache[i] {
                continue;
            }
            match &self.nodes[i] {
                Node::Const(_) | Node::Var(_) => {}
                Node::Not(a) => cache[a.index()] = true,
                Node::And(kids) | Node::Or(kids) => {
                    for k in kids.iter() {
                        cache[k.index()] = true;
                    }
                }
            }
        }
        for i in 0..n {
            if !cache[i] {
                continue;
            }
            cache[i] = match &self.nodes[i] {
                Node::Const(b) => *b,
                Node::Var(x) => assign(*x),
                Node::Not(a) => !cache[a.index()],
                Node::And(kids) => kids.iter().all(|k| cache[k.index()]),
                Node::Or(kids) => kids.iter().any(|k| cache[k.index()]),
            };
        }
        cache[id.index()]
    }

    /// Copies the formula rooted at each element of `roots` into `dst`,
    /// rewriting every variable through `map`.  Returns the translated
    /// roots in order.  `map` may target variables or whole formulas in
    /// the destination arena.
    pub fn copy_into(
        &self,
        roots: &[FormulaId],
        dst: &mut Arena,
        map: &dyn Fn(&mut Arena, u32) -> FormulaId,
    ) -> Vec<FormulaId> {
        let max = match roots.iter().max() {
            Some(m) => m.index(),
            None => return Vec::new(),
        };
        let mut xlat: Vec<FormulaId> = Vec::with_capacity(max + 1);
        for i in 0..=max {
            let id = match &self.nodes[i] {
                Node::Const(b) => dst.constant(*b),
                Node::Var(x) => map(dst, *x),
                Node::Not(a) => {
                    let t = xlat[a.index()];
                    dst.not(t)
                }
                Node::And(kids) => {
                    let ts: Vec<FormulaId> = kids.iter().map(|k| xlat[k.index()]).collect();
                    dst.and(ts)
                }
                Node::Or(kids) => {
                    let ts: Vec<FormulaId> = kids.iter().map(|k| xlat[k.index()]).collect();
                    dst.or(ts)
                }
            };
            xlat.push(id);
        }
        roots.iter().map(|r| xlat[r.index()]).collect()
    }

    /// Substitutes formulas for variables within the same arena.
    pub fn substitute(
        &mut self,
        root: FormulaId,
        subst: &dyn Fn(u32) -> Option<FormulaId>,
    ) -> FormulaId {
        let mut xlat: Vec<FormulaId> = Vec::with_capacity(root.index() + 1);
        for i in 0..=root.index() {
            let id = match self.nodes[i].clone() {
                Node::Const(b) => self.constant(b),
                Node::Var(x) => match subst(x) {
                    Some(f) => f,
                    None => FormulaId(i as u32),
                },
                Node::Not(a) => {
                    let t = xlat[a.index()];
                    self.not(t)
                }
                Node::And(kids) => {
                    let ts: Vec<FormulaId> = kids.iter().map(|k| xlat[k.index()]).collect();
                    self.and(ts)
                }
                Node::Or(kids) => {
                    let ts: Vec<FormulaId> = kids.iter().map(|k| xlat[k.index()]).collect();
                    self.or(ts)
                }
            };
            xlat.push(id);
        }
        xlat[root.index()]
    }

    /// Collects the distinct variables under `id`, ascending.
    pub fn vars(&self, id: FormulaId) -> Vec<u32> {
        let mut reach = vec![false; id.index() + 1];
        reach[id.index()] = true;
        let mut out = Vec::new();
        for i in (0..=id.index()).rev() {
            if !reach[i] {
                continue;
            }
            match &self.nodes[i] {
                Node::Const(_) => {}
                Node::Var(x) => out.push(*x),
                Node::Not(a) => reach[a.index()] = true,
                Node::And(kids) | Node::Or(kids) => {
                    for k in kids.iter() {
                        reach[k.index()] = true;
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Renders `id` with `name` for variables; used by debug dumps.
    pub fn display(&self, id: FormulaId, name: &dyn Fn(u32) -> String) -> String {
        match self.node(id) {
            Node::Const(b) => b.to_string(),
            Node::Var(x) => name(*x),
            Node::Not(a) => format!("!{}", self.display_atomic(*a, name)),
            Node::And(kids) => {
                let parts: Vec<String> =
                    kids.iter().map(|k| self.display_atomic(*k, name)).collect();
                parts.join(" & ")
            }
            Node::Or(kids) => {
                let parts: Vec<String> =
                    kids.iter().map(|k| self.display_atomic(*k, name)).collect();
                parts.join(" | ")
            }
        }
    }

    fn display_atomic(&self, id: FormulaId, name: &dyn Fn(u32) -> String) -> String {
        match self.node(id) {
            Node::Const(_) | Node::Var(_) | Node::Not(_) => self.display(id, name),
            _ => format!("({})", self.display(id, name)),
        }
    }
}
