//! Unbounded unreachability by property-directed incremental
//! strengthening.
//!
//! Maintains a sequence of frames `F_0 ⊇ … ⊇ F_k` over-approximating
//! the states reachable in at most that many steps (`F_0` is the reset
//! state alone; the system is functional, so reset is a single point).
//! Bad states found at the frontier spawn proof obligations; blocking
//! an obligation learns a clause that is inductive relative to the
//! previous frame, generalized by dropping literals while the relative
//! induction check keeps succeeding.  Obligations that trace all the
//! way back to reset yield a concrete run instead.  When some frame's
//! new clauses all push forward, the frame equals its successor and is
//! a full inductive invariant.
//!
//! Each frame owns a solver preloaded with one copy of the step logic;
//! frame clauses are added permanently (frames only strengthen), while
//! per-query hypotheses ride on throwaway activation literals.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::cnf::{load_functional_step, StepCnf};
use super::sat::{Lit, SatResult, Solver};
use super::{Certificate, CheckResult, Control, Invariant, Trace};
use crate::ts::TransitionSystem;

/// Conjunction of latch literals, sorted by latch index.
type Cube = Vec<(usize, bool)>;

fn lit_for(base: Lit, value: bool) -> Lit {
    if value {
        base
    } else {
        !base
    }
}

struct FrameSolver {
    solver: Solver,
    step: StepCnf,
}

struct Obligation {
    /// Concrete state (as a full-width cube) that must be shown
    /// unreachable within `frame` steps — or reached.
    cube: Cube,
    frame: usize,
    /// Next link toward the bad state, with the inputs taking this
    /// state there.
    succ: Option<usize>,
    inputs_to_succ: Vec<bool>,
}

enum BlockOutcome {
    /// The cube is unreachable from the previous frame; `kept` is the
    /// subset of literals the solver core certified.
    Blocked { kept: Cube },
    /// A previous-frame state stepping into the cube.
    Predecessor { state: Vec<bool>, inputs: Vec<bool> },
}

struct Ic3<'a> {
    ts: &'a TransitionSystem,
    reset: Vec<bool>,
    /// `frames[i]` holds the cubes blocked exactly up to frame `i`
    /// (delta encoding: `F_i` is the conjunction of all `frames[j]`
    /// clauses with `j ≥ i`).
    frames: Vec<Vec<Cube>>,
    solvers: Vec<FrameSolver>,
    records: Vec<Obligation>,
    queue: BinaryHeap<Reverse<(usize, u64)>>,
    /// Queue entries carry (frame, seq); seq indexes `queue_ids`.
    queue_ids: Vec<usize>,
}

impl<'a> Ic3<'a> {
    fn new(ts: &'a TransitionSystem) -> Ic3<'a> {
        Ic3 {
            ts,
            reset: ts.initial_latches(),
            frames: vec![Vec::new()],
            solvers: Vec::new(),
            records: Vec::new(),
            queue: BinaryHeap::new(),
            queue_ids: Vec::new(),
        }
    }

    /// Materializes solvers and delta lists up to frame `k`.
    fn ensure_frame(&mut self, k: usize) {
        while self.solvers.len() <= k {
            let i = self.solvers.len();
            let mut solver = Solver::new();
            let step = load_functional_step(self.ts, &mut solver);
            if i == 0 {
                for (&lit, &r) in step.latches.iter().zip(&self.reset) {
                    solver.add_clause(&[lit_for(lit, r)]);
                }
            } else {
                for j in i..self.frames.len() {
                    for cube in &self.frames[j] {
                        let cl = clause_lits(&step, cube);
                        solver.add_clause(&cl);
                    }
                }
            }
            self.solvers.push(FrameSolver { solver, step });
        }
        while self.frames.len() <= k {
            self.frames.push(Vec::new());
        }
    }

    fn excludes_reset(&self, cube: &Cube) -> bool {
        cube.iter().any(|&(latch, v)| self.reset[latch] != v)
    }

    /// Re-adds a literal from `fallback` if the core dropped every
    /// literal separating the cube from reset.
    fn fix_reset_exclusion(&self, mut cube: Cube, fallback: &Cube) -> Cube {
        if self.excludes_reset(&cube) {
            return cube;
        }
        let lit = fallback
            .iter()
            .copied()
            .find(|&(latch, v)| self.reset[latch] != v)
            .expect("fallback cube excludes reset");
        let at = cube.partition_point(|&l| l < lit);
        cube.insert(at, lit);
        cube
    }

    /// The relative induction query for `cube` at frame `n`: can a
    /// state of `F_{n-1}` outside the cube step into it?
    fn try_block(&mut self, cube: &Cube, n: usize) -> BlockOutcome {
        let fs = &mut self.solvers[n - 1];
        let act = Lit::pos(fs.solver.new_var());
        let mut guard = clause_lits(&fs.step, cube);
        guard.push(!act);
        fs.solver.add_clause(&guard);
        let mut assumptions = vec![act];
        assumptions
            .extend(cube.iter().map(|&(latch, v)| lit_for(fs.step.nexts[latch], v)));
        let out = match fs.solver.solve_assuming(&assumptions) {
            SatResult::Sat => BlockOutcome::Predecessor {
                state: fs.step.latches.iter().map(|&l| fs.solver.model_lit(l)).collect(),
                inputs: fs.step.inputs.iter().map(|&l| fs.solver.model_lit(l)).collect(),
            },
            SatResult::Unsat => {
                let core: HashSet<Lit> = fs.solver.core().iter().copied().collect();
                let kept: Cube = cube
                    .iter()
                    .copied()
                    .filter(|&(latch, v)| core.contains(&lit_for(fs.step.nexts[latch], v)))
                    .collect();
                BlockOutcome::Blocked { kept }
            }
        };
        // Retire the activation literal so the ¬cube hypothesis dies.
        fs.solver.add_clause(&[!act]);
        out
    }

    /// Shrinks a blocked cube: drop literals one at a time, keeping
    /// drops after which the cube still excludes reset and stays
    /// relatively inductive.  Every adopted cube contains the
    /// original states, so the final clause still blocks them.
    fn generalize(&mut self, cube: Cube, n: usize) -> Cube {
        let mut cur = cube.clone();
        for lit in cube {
            if cur.len() == 1 {
                break;
            }
            let Some(pos) = cur.iter().position(|&l| l == lit) else {
                continue; // an earlier core already removed it
            };
            let mut cand = cur.clone();
            cand.remove(pos);
            if !self.excludes_reset(&cand) {
                continue;
            }
            if let BlockOutcome::Blocked { kept } = self.try_block(&cand, n) {
                cur = self.fix_reset_exclusion(kept, &cand);
            }
        }
        cur
    }

    /// Records the clause ¬cube in frames 1..=level.
    fn add_blocked(&mut self, cube: Cube, level: usize) {
        for i in 1..=level {
            let cl = clause_lits(&self.solvers[i].step, &cube);
            self.solvers[i].solver.add_clause(&cl);
        }
        self.frames[level].push(cube);
    }

    fn push_obligation(&mut self, id: usize) {
        let seq = self.queue_ids.len() as u64;
        self.queue_ids.push(id);
        self.queue.push(Reverse((self.records[id].frame, seq)));
    }

    /// Blocks every bad state reachable within `k` frames, or returns
    /// the run that proves one reachable.
    fn clear_frontier(&mut self, k: usize, ctrl: &Control) -> Result<Option<Trace>, String> {
        loop {
            if ctrl.should_stop() {
                return Err("stopped".into());
            }
            let fs = &mut self.solvers[k];
            let bad = fs.step.bad;
            if fs.solver.solve_assuming(&[bad]) == SatResult::Unsat {
                return Ok(None);
            }
            let state: Vec<bool> =
                fs.step.latches.iter().map(|&l| fs.solver.model_lit(l)).collect();
            let id = self.records.len();
            self.records.push(Obligation {
                cube: full_cube(&state),
                frame: k,
                succ: None,
                inputs_to_succ: Vec::new(),
            });
            self.push_obligation(id);

            while let Some(Reverse((frame, seq))) = self.queue.pop() {
                if ctrl.should_stop() {
                    return Err("stopped".into());
                }
                let id = self.queue_ids[seq as usize];
                debug_assert_eq!(self.records[id].frame, frame);
                debug_assert!(frame >= 1);
                let cube = self.records[id].cube.clone();
                match self.try_block(&cube, frame) {
                    BlockOutcome::Predecessor { state, inputs } => {
                        if state == self.reset {
                            return Ok(Some(self.build_trace(id, inputs)));
                        }
                        debug_assert!(frame > 1, "the init solver only models reset");
                        let pid = self.records.len();
                        self.records.push(Obligation {
                            cube: full_cube(&state),
                            frame: frame - 1,
                            succ: Some(id),
                            inputs_to_succ: inputs,
                        });
                        self.push_obligation(pid);
                        self.push_obligation(id);
                    }
                    BlockOutcome::Blocked { kept } => {
                        let fixed = self.fix_reset_exclusion(kept, &cube);
                        let generalized = self.generalize(fixed, frame);
                        self.add_blocked(generalized, frame);
                        if frame < k {
                            self.records[id].frame = frame + 1;
                            self.push_obligation(id);
                        }
                    }
                }
            }
        }
    }

    /// Walks the obligation chain from the state reached out of reset
    /// up to the bad state, replaying inputs to rebuild the run.
    fn build_trace(&self, first: usize, from_reset: Vec<bool>) -> Trace {
        let mut inputs = vec![from_reset];
        let mut cur = first;
        loop {
            let rec = &self.records[cur];
            match rec.succ {
                Some(next) => {
                    inputs.push(rec.inputs_to_succ.clone());
                    cur = next;
                }
                None => break,
            }
        }
        let mut states = vec![self.reset.clone()];
        for inp in &inputs {
            states.push(self.ts.simulate_step(states.last().unwrap(), inp));
        }
        debug_assert!(self.ts.bad_at(states.last().unwrap()));
        Trace { inputs, states }
    }

    /// Pushes clauses forward; a frame left empty means fixpoint.
    fn propagate(&mut self, k: usize) -> Option<usize> {
        for i in 1..k {
            let cubes = std::mem::take(&mut self.frames[i]);
            let mut retained = Vec::new();
            for cube in cubes {
                let fs = &mut self.solvers[i];
                let assumptions: Vec<Lit> = cube
                    .iter()
                    .map(|&(latch, v)| lit_for(fs.step.nexts[latch], v))
                    .collect();
                if fs.solver.solve_assuming(&assumptions) == SatResult::Unsat {
                    let cl = clause_lits(&self.solvers[i + 1].step, &cube);
                    self.solvers[i + 1].solver.add_clause(&cl);
                    self.frames[i + 1].push(cube);
                } else {
                    retained.push(cube);
                }
            }
            let empty = retained.is_empty();
            self.frames[i] = retained;
            if empty {
                return Some(i);
            }
        }
        None
    }

    fn invariant_from(&self, fixpoint: usize) -> Invariant {
        let clauses = self.frames[fixpoint + 1..]
            .iter()
            .flatten()
            .map(|cube| cube.iter().map(|&(latch, v)| (latch, !v)).collect())
            .collect();
        Invariant { clauses }
    }
}

fn full_cube(state: &[bool]) -> Cube {
    state.iter().copied().enumerate().collect()
}

/// The clause ¬cube over a solver copy's current-state literals.
fn clause_lits(step: &StepCnf, cube: &Cube) -> Vec<Lit> {
    cube.iter().map(|&(latch, v)| lit_for(step.latches[latch], !v)).collect()
}

/// Decides reachability outright; `max_frames` caps the frame count.
/// Returns the result and the number of frames built.
pub fn check(ts: &TransitionSystem, max_frames: usize, ctrl: &Control) -> (CheckResult, usize) {
    assert!(ts.is_functional(), "inductive engine needs a functional system");
    let reset = ts.initial_latches();
    if ts.bad_at(&reset) {
        return (
            CheckResult::Reachable(Trace { inputs: vec![], states: vec![reset] }),
            0,
        );
    }
    let mut ic3 = Ic3::new(ts);
    ic3.ensure_frame(0);
    let mut k = 0;
    loop {
        k += 1;
        if k > max_frames {
            return (
                CheckResult::Unknown(format!("no proof within {max_frames} frames")),
                k - 1,
            );
        }
        if ctrl.should_stop() {
            return (CheckResult::Unknown("stopped".into()), k - 1);
        }
        ic3.ensure_frame(k);
        match ic3.clear_frontier(k, ctrl) {
            Err(reason) => return (CheckResult::Unknown(reason), k),
            Ok(Some(trace)) => return (CheckResult::Reachable(trace), k),
            Ok(None) => {}
        }
        if let Some(fix) = ic3.propagate(k) {
            let inv = ic3.invariant_from(fix);
            return (CheckResult::Unreachable(Certificate::Inductive(inv)), k);
        }
    }
}
