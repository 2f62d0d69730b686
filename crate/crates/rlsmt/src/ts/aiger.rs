//! And-inverter graph exchange in the AIGER 1.9 ASCII format.
//!
//! Functional transition systems serialize to `aag` files with one
//! bad-state property, so external model checkers can consume them, and
//! parse back into [`TransitionSystem`]s for cross-checking.  Literal
//! conventions follow the format: variable `v` is literal `2v`, an odd
//! literal negates, 0 and 1 are the constants.  Variables `1..=I` are
//! the inputs, the next `L` are latches, the rest and-gates.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{input_var, latch_var, unpack_var, TransitionSystem, TsKind, TsVar};
use crate::logic::{Arena, FormulaId, Node};
use crate::symbols::SYMBOL_BITS;

pub const LIT_FALSE: u32 = 0;
pub const LIT_TRUE: u32 = 1;

pub fn negate(lit: u32) -> u32 {
    lit ^ 1
}

/// An and-inverter graph with latches and a single bad-state property.
#[derive(Debug, Clone)]
pub struct Aig {
    num_inputs: usize,
    /// Per latch: next-state literal and reset value.
    latches: Vec<(u32, bool)>,
    bad: u32,
    /// `(lhs, rhs0, rhs1)` with `rhs0 >= rhs1`.
    ands: Vec<(u32, u32, u32)>,
    strash: HashMap<(u32, u32), u32>,
}

impl Aig {
    /// An empty graph; latches start with next = constant false.
    pub fn new(num_inputs: usize, num_latches: usize) -> Aig {
        Aig {
            num_inputs,
            latches: vec![(LIT_FALSE, false); num_latches],
            bad: LIT_FALSE,
            ands: Vec::new(),
            strash: HashMap::new(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_latches(&self) -> usize {
        self.latches.len()
    }

    pub fn input_lit(&self, i: usize) -> u32 {
        assert!(i < self.num_inputs);
        2 * (i as u32 + 1)
    }

    pub fn latch_lit(&self, i: usize) -> u32 {
        assert!(i < self.latches.len());
        2 * (self.num_inputs + i + 1) as u32
    }

    pub fn set_latch(&mut self, i: usize, next: u32, reset: bool) {
        self.latches[i] = (next, reset);
    }

    pub fn set_bad(&mut self, lit: u32) {
        self.bad = lit;
    }

    /// Structurally hashed conjunction with constant folding.
    pub fn and(&mut self, a: u32, b: u32) -> u32 {
        if a == LIT_FALSE || b == LIT_FALSE || a == negate(b) {
            return LIT_FALSE;
        }
        if a == LIT_TRUE || a == b {
            return b;
        }
        if b == LIT_TRUE {
            return a;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&lit) = self.strash.get(&key) {
            return lit;
        }
        let lhs = 2 * (self.num_inputs + self.latches.len() + self.ands.len() + 1) as u32;
        self.ands.push((lhs, key.1, key.0));
        self.strash.insert(key, lhs);
        lhs
    }

    pub fn or(&mut self, a: u32, b: u32) -> u32 {
        let g = self.and(negate(a), negate(b));
        negate(g)
    }

    fn max_var(&self) -> usize {
        self.num_inputs + self.latches.len() + self.ands.len()
    }

    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "aag {} {} {} 0 {} 1",
            self.max_var(),
            self.num_inputs,
            self.latches.len(),
            self.ands.len()
        )
        .unwrap();
        for i in 0..self.num_inputs {
            writeln!(out, "{}", self.input_lit(i)).unwrap();
        }
        for (i, &(next, reset)) in self.latches.iter().enumerate() {
            writeln!(out, "{} {} {}", self.latch_lit(i), next, reset as u32).unwrap();
        }
        writeln!(out, "{}", self.bad).unwrap();
        for &(lhs, rhs0, rhs1) in &self.ands {
            writeln!(out, "{lhs} {rhs0} {rhs1}").unwrap();
        }
        out
    }

    /// Reads the subset this module writes: ASCII, no outputs, exactly
    /// one bad property, zero-or-one latch resets, no variable gaps.
    /// Anything after the and-gate section (symbol table, comments) is
    /// ignored.
    pub fn parse(text: &str) -> Result<Aig, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty file")?;
        let mut fields = header.split_whitespace();
        match fields.next() {
            Some("aag") => {}
            Some("aig") => return Err("binary aiger not supported, use ascii (aag)".into()),
            _ => return Err(format!("malformed header {header:?}")),
        }
        let mut nums = Vec::new();
        for f in fields {
            nums.push(f.parse::<usize>().map_err(|_| format!("malformed header {header:?}"))?);
        }
        if !(5..=9).contains(&nums.len()) {
            return Err(format!("malformed header {header:?}"));
        }
        nums.resize(9, 0);
        let [m, i, l, o, a, b, c, j, f] = nums[..] else { unreachable!() };
        if o != 0 || b != 1 || c != 0 || j != 0 || f != 0 {
            return Err("expected exactly one bad property and no outputs".into());
        }
        if m != i + l + a {
            return Err("variable gaps not supported".into());
        }
        let max_lit = (2 * m + 1) as u32;
        let mut next_line = |what: &str| -> Result<Vec<u32>, String> {
            let line = lines.next().ok_or_else(|| format!("missing {what} line"))?;
            line.split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| format!("malformed {what} line {line:?}"))
                })
                .collect()
        };

        let mut aig = Aig::new(i, l);
        for idx in 0..i {
            let lits = next_line("input")?;
            if lits != [aig.input_lit(idx)] {
                return Err(format!("input {idx} must be literal {}", aig.input_lit(idx)));
            }
        }
        for idx in 0..l {
            let lits = next_line("latch")?;
            let (lit, next, reset) = match lits[..] {
                [a, b] => (a, b, 0),
                [a, b, c] => (a, b, c),
                _ => return Err("latch line needs two or three fields".into()),
            };
            if lit != aig.latch_lit(idx) {
                return Err(format!("latch {idx} must be literal {}", aig.latch_lit(idx)));
            }
            if next > max_lit {
                return Err(format!("latch next literal {next} out of range"));
            }
            let reset = match reset {
                0 => false,
                1 => true,
                _ => return Err("uninitialized latches not supported".into()),
            };
            aig.latches[idx] = (next, reset);
        }
        let bad = next_line("bad")?;
        let [bad] = bad[..] else { return Err("bad line needs one literal".into()) };
        if bad > max_lit {
            return Err(format!("bad literal {bad} out of range"));
        }
        aig.bad = bad;
        for idx in 0..a {
            let lits = next_line("and")?;
            let [lhs, rhs0, rhs1] = lits[..] else {
                return Err("and line needs three literals".into());
            };
            let expect = 2 * (i + l + idx + 1) as u32;
            if lhs != expect {
                return Err(format!("and gate {idx} must define literal {expect}, got {lhs}"));
            }
            if rhs0 > max_lit || rhs1 > max_lit {
                return Err(format!("and operand out of range in gate {lhs}"));
            }
            aig.ands.push((lhs, rhs0, rhs1));
            aig.strash.insert((rhs0.min(rhs1), rhs0.max(rhs1)), lhs);
        }
        Ok(aig)
    }
}

/// Flattens a functional system into an and-inverter graph.  Relational
/// systems have no per-latch next-state functions and are refused.
pub fn from_ts(ts: &TransitionSystem) -> Result<Aig, String> {
    let TsKind::Functional { resets, nexts } = &ts.kind else {
        return Err("only functional systems export to aiger".into());
    };
    let mut aig = Aig::new(ts.num_inputs(), ts.num_latches());
    let mut roots = vec![ts.bad];
    roots.extend_from_slice(nexts);
    let lits = flatten(&ts.arena, &roots, &mut aig);
    aig.set_bad(lits[0]);
    for (i, (&next, &reset)) in lits[1..].iter().zip(resets).enumerate() {
        aig.set_latch(i, next, reset);
    }
    Ok(aig)
}

/// Converts formulas over latch and input variables into graph
/// literals, sharing structure through the strash.
fn flatten(arena: &Arena, roots: &[FormulaId], aig: &mut Aig) -> Vec<u32> {
    // Children always have smaller ids, so one ascending pass over the
    // reachable ids sees definitions before uses.
    let mut reachable = roots.to_vec();
    let mut stack = roots.to_vec();
    let mut seen: Vec<bool> = Vec::new();
    let mark = |seen: &mut Vec<bool>, id: FormulaId| -> bool {
        if seen.len() <= id.index() {
            seen.resize(id.index() + 1, false);
        }
        std::mem::replace(&mut seen[id.index()], true)
    };
    for &r in roots {
        mark(&mut seen, r);
    }
    while let Some(id) = stack.pop() {
        let children: &[FormulaId] = match arena.node(id) {
            Node::Const(_) | Node::Var(_) => &[],
            Node::Not(c) => std::slice::from_ref(c),
            Node::And(cs) | Node::Or(cs) => cs,
        };
        for &c in children {
            if !mark(&mut seen, c) {
                reachable.push(c);
                stack.push(c);
            }
        }
    }
    reachable.sort_unstable_by_key(|id| id.index());
    reachable.dedup();

    let mut lit: HashMap<FormulaId, u32> = HashMap::new();
    for &id in &reachable {
        let l = match arena.node(id) {
            Node::Const(b) => *b as u32,
            Node::Var(v) => match unpack_var(*v) {
                TsVar::Input(i) => aig.input_lit(i),
                TsVar::Latch(i) => aig.latch_lit(i),
                TsVar::NextLatch(_) => unreachable!("next-state variable in functional formula"),
            },
            Node::Not(c) => negate(lit[c]),
            Node::And(cs) => {
                let mut acc = LIT_TRUE;
                for c in cs.iter() {
                    acc = aig.and(acc, lit[c]);
                }
                acc
            }
            Node::Or(cs) => {
                let mut acc = LIT_FALSE;
                for c in cs.iter() {
                    acc = aig.or(acc, lit[c]);
                }
                acc
            }
        };
        lit.insert(id, l);
    }
    roots.iter().map(|r| lit[r]).collect()
}

impl TransitionSystem {
    /// Rebuilds a functional system from a graph.  The input count must
    /// be a whole number of symbol tracks; the input classes degrade to
    /// the finest partition because the graph keeps no range structure.
    pub fn from_aig(aig: &Aig) -> Result<TransitionSystem, String> {
        if aig.num_inputs % SYMBOL_BITS != 0 {
            return Err(format!(
                "input count {} is not a multiple of {SYMBOL_BITS}",
                aig.num_inputs
            ));
        }
        let num_vars = aig.num_inputs / SYMBOL_BITS;
        if aig.latches.len() < aig.num_inputs {
            return Err("fewer latches than history register bits".into());
        }
        let num_state_bits = aig.latches.len() - aig.num_inputs;

        let gates: HashMap<u32, (u32, u32)> =
            aig.ands.iter().map(|&(lhs, r0, r1)| (lhs, (r0, r1))).collect();
        let mut arena = Arena::new();
        let mut memo: HashMap<u32, FormulaId> = HashMap::new();
        let mut formula_of = |lit: u32, arena: &mut Arena| -> FormulaId {
            // Iterative post-order over the gate graph.
            let mut result: HashMap<u32, FormulaId> = std::mem::take(&mut memo);
            let mut stack = vec![lit & !1];
            while let Some(&v) = stack.last() {
                if result.contains_key(&v) {
                    stack.pop();
                    continue;
                }
                let f = if v == 0 {
                    arena.ff()
                } else if let Some(&(r0, r1)) = gates.get(&v) {
                    let deps = [r0 & !1, r1 & !1];
                    let missing: Vec<u32> =
                        deps.iter().copied().filter(|d| !result.contains_key(d)).collect();
                    if !missing.is_empty() {
                        stack.extend(missing);
                        continue;
                    }
                    let side = |r: u32, arena: &mut Arena, result: &HashMap<u32, FormulaId>| {
                        let f = result[&(r & !1)];
                        if r & 1 == 1 {
                            arena.not(f)
                        } else {
                            f
                        }
                    };
                    let a = side(r0, arena, &result);
                    let b = side(r1, arena, &result);
                    arena.and2(a, b)
                } else {
                    let var = (v / 2) as usize - 1;
                    if var < aig.num_inputs {
                        arena.var(input_var(var))
                    } else {
                        arena.var(latch_var(var - aig.num_inputs))
                    }
                };
                result.insert(v, f);
                stack.pop();
            }
            let f = result[&(lit & !1)];
            memo = result;
            if lit & 1 == 1 {
                arena.not(f)
            } else {
                f
            }
        };

        let bad = formula_of(aig.bad, &mut arena);
        let mut resets = Vec::with_capacity(aig.latches.len());
        let mut nexts = Vec::with_capacity(aig.latches.len());
        for &(next, reset) in &aig.latches {
            resets.push(reset);
            nexts.push(formula_of(next, &mut arena));
        }
        let input_classes = (0..num_vars).map(|_| (0..=crate::symbols::MAX_SYMBOL).collect()).collect();
        Ok(TransitionSystem {
            arena,
            num_state_bits,
            num_vars,
            bad,
            kind: TsKind::Functional { resets, nexts },
            input_classes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::{parse_regex, ParseOptions};
    use crate::smt::{compile_problem, Formula, Mode, Problem};
    use crate::symbols::{Symbol, SIGMA_END, SIGMA_START};

    const GOLDEN: &str = "aag 2 1 1 0 0 1\n2\n4 2 0\n4\n";

    fn golden_aig() -> Aig {
        // One latch copying the single input, bad when the latch holds.
        let mut aig = Aig::new(1, 1);
        let next = aig.input_lit(0);
        aig.set_latch(0, next, false);
        let bad = aig.latch_lit(0);
        aig.set_bad(bad);
        aig
    }

    #[test]
    fn emits_golden_single_latch() {
        assert_eq!(golden_aig().to_ascii(), GOLDEN);
    }

    #[test]
    fn parse_emit_is_identity_on_golden() {
        let aig = Aig::parse(GOLDEN).unwrap();
        assert_eq!(aig.to_ascii(), GOLDEN);
        assert_eq!(aig.num_inputs(), 1);
        assert_eq!(aig.num_latches(), 1);
    }

    #[test]
    fn structural_hashing_folds_and_shares() {
        let mut aig = Aig::new(2, 0);
        let (a, b) = (aig.input_lit(0), aig.input_lit(1));
        assert_eq!(aig.and(a, LIT_FALSE), LIT_FALSE);
        assert_eq!(aig.and(a, LIT_TRUE), a);
        assert_eq!(aig.and(a, a), a);
        assert_eq!(aig.and(a, negate(a)), LIT_FALSE);
        let g1 = aig.and(a, b);
        let g2 = aig.and(b, a);
        assert_eq!(g1, g2);
        assert_eq!(aig.ands.len(), 1);
        let o = aig.or(a, b);
        assert_eq!(o & 1, 1, "or is a negated and");
    }

    #[test]
    fn parse_rejects_malformed_files() {
        for (text, needle) in [
            ("", "empty"),
            ("aig 0 0 0 0 0", "binary"),
            ("aag 1 1 0 1 0\n2\n2\n", "bad property"),
            ("aag 5 1 1 0 0 1\n2\n4 2 0\n4\n", "gaps"),
            ("aag 2 1 1 0 0 1\n2\n4 2 4\n4\n", "uninitialized"),
            ("aag 2 1 1 0 0 1\n2\n4 9 0\n4\n", "out of range"),
            ("aag 2 1 1 0 0 1\n4\n4 2 0\n4\n", "input 0"),
        ] {
            let err = Aig::parse(text).unwrap_err();
            assert!(err.contains(needle), "{text:?} gave {err:?}");
        }
    }

    #[test]
    fn relational_systems_do_not_export() {
        let p = Problem {
            var_names: vec!["x".into()],
            formula: Formula::Member {
                var: 0,
                regex: parse_regex("a", ParseOptions::default()).unwrap(),
                pattern: "a".into(),
            },
        };
        let bfa = compile_problem(&p, Mode::Forward).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        assert!(from_ts(&ts).is_err());
    }

    /// Export, reparse, rebuild — the reconstructed system must agree
    /// with the original step by step on whole runs.
    #[test]
    fn round_trip_preserves_behaviour() {
        let p = Problem {
            var_names: vec!["x".into()],
            formula: Formula::Or(vec![
                Formula::Member {
                    var: 0,
                    regex: parse_regex("a(b|c)*", ParseOptions::default()).unwrap(),
                    pattern: "a(b|c)*".into(),
                },
                Formula::Not(Box::new(Formula::Member {
                    var: 0,
                    regex: parse_regex("(ab)*$", ParseOptions::default()).unwrap(),
                    pattern: "(ab)*$".into(),
                })),
            ]),
        };
        let bfa = compile_problem(&p, Mode::Reversed).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        let text = from_ts(&ts).unwrap().to_ascii();
        let back = TransitionSystem::from_aig(&Aig::parse(&text).unwrap()).unwrap();

        assert_eq!(back.num_latches(), ts.num_latches());
        assert_eq!(back.num_inputs(), ts.num_inputs());
        assert_eq!(back.initial_latches(), ts.initial_latches());

        let alphabet = [b'a' as Symbol, b'b' as Symbol, b'c' as Symbol];
        let mut words: Vec<Vec<Symbol>> = vec![vec![]];
        let mut frontier = words.clone();
        for _ in 0..2 {
            let mut next = Vec::new();
            for w in &frontier {
                for &s in &alphabet {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        for word in words {
            let mut run = vec![SIGMA_START];
            run.extend(&word);
            run.push(SIGMA_END);
            let mut s1 = ts.initial_latches();
            let mut s2 = back.initial_latches();
            for &sym in &run {
                let inputs = ts.inputs_for_symbols(&[sym]);
                s1 = ts.simulate_step(&s1, &inputs);
                s2 = back.simulate_step(&s2, &inputs);
                assert_eq!(s1, s2, "states diverge after {sym}");
                assert_eq!(ts.bad_at(&s1), back.bad_at(&s2));
            }
        }
    }

    #[test]
    fn emitted_text_reparses_byte_exactly() {
        let p = Problem {
            var_names: vec!["x".into()],
            formula: Formula::Member {
                var: 0,
                regex: parse_regex("^a+b", ParseOptions::default()).unwrap(),
                pattern: "^a+b".into(),
            },
        };
        let bfa = compile_problem(&p, Mode::Reversed).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        let text = from_ts(&ts).unwrap().to_ascii();
        assert_eq!(Aig::parse(&text).unwrap().to_ascii(), text);
    }
}
