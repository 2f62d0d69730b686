//! Bounded reachability by incremental unrolling.
//!
//! One solver holds the whole unrolling; each bound adds a frame of
//! clauses and asks for bad under an assumption, so learnt clauses
//! carry over between bounds.  Bounds grow one step at a time from
//! zero, which makes the first hit a shortest run.  Handles both
//! encodings: functional frames chain next-state literals directly,
//! relational frames assert the step relation between adjacent latch
//! vectors.

use super::cnf::CnfCtx;
use super::sat::{Lit, SatResult, Solver};
use super::{CheckResult, Control, Trace};
use crate::ts::{unpack_var, TransitionSystem, TsKind, TsVar};

struct Frame {
    latches: Vec<Lit>,
    /// Inputs consumed stepping out of this frame; filled on extension.
    inputs: Vec<Lit>,
}

pub struct Bmc<'a> {
    ts: &'a TransitionSystem,
    solver: Solver,
    base_ctx: CnfCtx,
    frames: Vec<Frame>,
}

impl<'a> Bmc<'a> {
    pub fn new(ts: &'a TransitionSystem) -> Bmc<'a> {
        let mut solver = Solver::new();
        let base_ctx = CnfCtx::new(&mut solver);
        let mut bmc = Bmc { ts, solver, base_ctx, frames: Vec::new() };
        bmc.push_initial_frame();
        bmc
    }

    fn push_initial_frame(&mut self) {
        match &self.ts.kind {
            TsKind::Functional { resets, .. } => {
                // Reset is a fixed vector; pin constants.
                let t = self.base_ctx.true_lit();
                let latches =
                    resets.iter().map(|&r| if r { t } else { !t }).collect();
                self.frames.push(Frame { latches, inputs: Vec::new() });
            }
            TsKind::Relational { init, .. } => {
                let latches: Vec<Lit> = (0..self.ts.num_latches())
                    .map(|_| Lit::pos(self.solver.new_var()))
                    .collect();
                let mut ctx = self.base_ctx.sibling();
                let root = ctx.encode(&self.ts.arena, *init, &mut self.solver, &mut |_, v| {
                    match unpack_var(v) {
                        TsVar::Latch(i) => latches[i],
                        _ => unreachable!("init reads latches only"),
                    }
                });
                self.solver.add_clause(&[root]);
                self.frames.push(Frame { latches, inputs: Vec::new() });
            }
        }
    }

    fn extend(&mut self) {
        let t = self.frames.len() - 1;
        let inputs: Vec<Lit> =
            (0..self.ts.num_inputs()).map(|_| Lit::pos(self.solver.new_var())).collect();
        self.frames[t].inputs = inputs.clone();
        match &self.ts.kind {
            TsKind::Functional { nexts, .. } => {
                let mut ctx = self.base_ctx.sibling();
                let cur = self.frames[t].latches.clone();
                let latches = nexts
                    .iter()
                    .map(|&f| {
                        ctx.encode(&self.ts.arena, f, &mut self.solver, &mut |_, v| {
                            match unpack_var(v) {
                                TsVar::Latch(i) => cur[i],
                                TsVar::Input(i) => inputs[i],
                                TsVar::NextLatch(_) => unreachable!(),
                            }
                        })
                    })
                    .collect();
                self.frames.push(Frame { latches, inputs: Vec::new() });
            }
            TsKind::Relational { step, .. } => {
                let latches: Vec<Lit> = (0..self.ts.num_latches())
                    .map(|_| Lit::pos(self.solver.new_var()))
                    .collect();
                let mut ctx = self.base_ctx.sibling();
                let cur = self.frames[t].latches.clone();
                let next = latches.clone();
                let root =
                    ctx.encode(&self.ts.arena, *step, &mut self.solver, &mut |_, v| {
                        match unpack_var(v) {
                            TsVar::Latch(i) => cur[i],
                            TsVar::Input(i) => inputs[i],
                            TsVar::NextLatch(i) => next[i],
                        }
                    });
                self.solver.add_clause(&[root]);
                self.frames.push(Frame { latches, inputs: Vec::new() });
            }
        }
    }

    /// Is bad reachable in exactly `k` steps (with frames built out as
    /// needed)?
    pub fn check_bound(&mut self, k: usize) -> bool {
        while self.frames.len() <= k {
            self.extend();
        }
        let latches = self.frames[k].latches.clone();
        let mut ctx = self.base_ctx.sibling();
        let bad =
            ctx.encode(&self.ts.arena, self.ts.bad, &mut self.solver, &mut |_, v| {
                match unpack_var(v) {
                    TsVar::Latch(i) => latches[i],
                    _ => unreachable!("bad reads latches only"),
                }
            });
        self.solver.solve_assuming(&[bad]) == SatResult::Sat
    }

    /// The satisfying run after a successful [`Bmc::check_bound`].
    pub fn trace(&self, k: usize) -> Trace {
        let states = self.frames[..=k]
            .iter()
            .map(|f| f.latches.iter().map(|&l| self.solver.model_lit(l)).collect())
            .collect();
        let inputs = self.frames[..k]
            .iter()
            .map(|f| f.inputs.iter().map(|&l| self.solver.model_lit(l)).collect())
            .collect();
        Trace { inputs, states }
    }
}

/// Searches bounds `0..=max_bound` in order; returns the result and
/// the last bound examined.
pub fn check(ts: &TransitionSystem, max_bound: usize, ctrl: &Control) -> (CheckResult, usize) {
    let mut bmc = Bmc::new(ts);
    for k in 0..=max_bound {
        if ctrl.should_stop() {
            return (CheckResult::Unknown("stopped".into()), k);
        }
        if bmc.check_bound(k) {
            return (CheckResult::Reachable(bmc.trace(k)), k);
        }
    }
    (
        CheckResult::Unknown(format!("no run within bound {max_bound}")),
        max_bound,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::verify::verify_trace;
    use crate::regex::{parse_regex, ParseOptions};
    use crate::smt::{compile_problem, Formula, Mode, Problem};
    use crate::symbols::{SIGMA_END, SIGMA_START};

    fn member(var: usize, pattern: &str) -> Formula {
        Formula::Member {
            var,
            regex: parse_regex(pattern, ParseOptions::default()).unwrap(),
            pattern: pattern.to_string(),
        }
    }

    fn problem(num_vars: usize, formula: Formula) -> Problem {
        Problem { var_names: (0..num_vars).map(|i| format!("v{i}")).collect(), formula }
    }

    fn run(p: &Problem, mode: Mode, max: usize) -> (CheckResult, usize, TransitionSystem) {
        let bfa = compile_problem(p, mode).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        let (r, k) = check(&ts, max, &Control::unlimited());
        (r, k, ts)
    }

    #[test]
    fn finds_shortest_run_in_both_encodings() {
        // Shortest accepted word "a": start mark, a, end mark.
        let p = problem(1, member(0, "ab*"));
        for mode in [Mode::Forward, Mode::Reversed] {
            let (r, k, ts) = run(&p, mode, 10);
            let CheckResult::Reachable(trace) = r else {
                panic!("{mode:?}: expected a run, got {r:?}")
            };
            assert_eq!(k, 3, "{mode:?}");
            assert_eq!(trace.len(), 3);
            verify_trace(&ts, &trace).unwrap();
            let syms: Vec<_> =
                trace.inputs.iter().map(|i| ts.input_symbol(i, 0)).collect();
            assert_eq!(syms, vec![SIGMA_START, b'a' as u16, SIGMA_END]);
        }
    }

    #[test]
    fn empty_word_needs_two_marks() {
        let p = problem(1, member(0, "a*"));
        for mode in [Mode::Forward, Mode::Reversed] {
            let (r, k, ts) = run(&p, mode, 10);
            let CheckResult::Reachable(trace) = r else { panic!() };
            assert_eq!(k, 2, "{mode:?}: only the two padding marks");
            verify_trace(&ts, &trace).unwrap();
        }
    }

    #[test]
    fn unsatisfiable_formulas_exhaust_the_bound() {
        let contradiction =
            Formula::And(vec![member(0, "^a+$"), member(0, "^b+$")]);
        let p = problem(1, contradiction);
        for mode in [Mode::Forward, Mode::Reversed] {
            let (r, k, _) = run(&p, mode, 8);
            assert!(matches!(r, CheckResult::Unknown(_)), "{mode:?}");
            assert_eq!(k, 8);
        }
    }

    #[test]
    fn modes_agree_on_bound_and_verdict() {
        let formulas = [
            member(0, "a(b|c)+"),
            Formula::And(vec![
                member(0, "[ab]*"),
                Formula::Not(Box::new(member(0, "a*"))),
            ]),
            Formula::Or(vec![member(0, "^ab"), member(0, "ba$")]),
            Formula::And(vec![member(0, "x[01]{3}"), member(0, "[01x]*1$")]),
        ];
        for formula in formulas {
            let p = problem(1, formula);
            let (rf, kf, _) = run(&p, Mode::Forward, 16);
            let (rr, kr, _) = run(&p, Mode::Reversed, 16);
            assert_eq!(rf.is_reachable(), rr.is_reachable());
            assert_eq!(kf, kr, "minimal bounds agree");
        }
    }

    #[test]
    fn two_variable_runs_decode_per_track() {
        let p = problem(
            2,
            Formula::And(vec![member(0, "^ab$"), member(1, "^[cd]{3}$")]),
        );
        let (r, _, ts) = run(&p, Mode::Reversed, 10);
        let CheckResult::Reachable(trace) = r else { panic!() };
        verify_trace(&ts, &trace).unwrap();
        // Tracks pad to the longer word: 3 symbols + both marks.
        assert_eq!(trace.len(), 5);
        let track = |v: usize| -> Vec<u16> {
            trace.inputs.iter().map(|i| ts.input_symbol(i, v)).collect()
        };
        assert_eq!(track(0)[0], SIGMA_START);
        assert_eq!(&track(0)[1..3], &[b'a' as u16, b'b' as u16]);
        assert!(track(0)[3..].iter().all(|&s| s == SIGMA_END));
        assert_eq!(track(1)[0], SIGMA_START);
        assert!(track(1)[1..4].iter().all(|&s| s == b'c' as u16 || s == b'd' as u16));
        assert_eq!(track(1)[4], SIGMA_END);
    }

    #[test]
    fn cancellation_stops_early() {
        let p = problem(1, Formula::And(vec![member(0, "^a+$"), member(0, "^b+$")]));
        let bfa = compile_problem(&p, Mode::Reversed).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        let ctrl = Control::unlimited();
        ctrl.cancel();
        let (r, k) = check(&ts, 50, &ctrl);
        assert!(matches!(r, CheckResult::Unknown(ref s) if s == "stopped"));
        assert_eq!(k, 0);
    }
}
