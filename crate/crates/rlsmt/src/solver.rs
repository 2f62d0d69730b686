//! End-to-end solving: compile the problem, run an engine, then decode
//! and independently re-check whatever came back.
//!
//! Every answer that leaves this module has survived a second opinion:
//! traces are replayed against the transition system and the decoded
//! words are evaluated against the original formula; invariants are
//! re-checked for initiation, consecution, and safety.  A failure of
//! any of these is reported as an error rather than papered over.

use std::time::{Duration, Instant};

use crate::mc::verify::{verify_invariant, verify_trace};
use crate::mc::{bmc, explicit, ic3, portfolio, Certificate, CheckResult, Control, Trace};
use crate::smt::{compile_problem, Mode, Problem};
use crate::symbols::{SIGMA_END, SIGMA_START};
use crate::ts::TransitionSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Bounded search only: finds runs, never proves their absence.
    Bmc,
    /// Inductive strengthening: decides both ways, reversed mode only.
    Ic3,
    /// Explicit-state enumeration, reversed mode only; for small
    /// systems and cross-checking.
    Explicit,
    /// Bounded and inductive in parallel, first definite answer wins.
    Portfolio,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub engine: Engine,
    pub mode: Mode,
    /// Longest run the bounded engine will look for.
    pub max_bound: usize,
    /// Frame cap for the inductive engine.
    pub max_frames: usize,
    /// State cap for explicit enumeration.
    pub state_limit: usize,
    pub timeout: Option<Duration>,
}

impl Default for SolverOptions {
    fn default() -> SolverOptions {
        SolverOptions {
            engine: Engine::Portfolio,
            mode: Mode::Reversed,
            max_bound: 300,
            max_frames: 300,
            state_limit: 2_000_000,
            timeout: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    /// Limits ran out first; the string says which.
    Unknown(String),
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    /// Satisfying assignment, one byte string per declared variable,
    /// in declaration order.  Present exactly when `status` is `Sat`.
    pub witness: Option<Vec<(String, Vec<u8>)>>,
    /// Which engine produced the answer.
    pub engine: &'static str,
    /// Bound reached, frames built, or states visited, per engine.
    pub depth: usize,
    pub elapsed: Duration,
}

pub fn solve(problem: &Problem, opts: &SolverOptions) -> Result<Solution, String> {
    let start = Instant::now();

    if problem.num_vars() == 0 {
        // Variable-free formulas are constants; no automata needed.
        let sat = problem.formula.evaluate(&[]);
        return Ok(Solution {
            status: if sat { Status::Sat } else { Status::Unsat },
            witness: sat.then(Vec::new),
            engine: "eval",
            depth: 0,
            elapsed: start.elapsed(),
        });
    }
    if let Some(v) = problem.formula.max_var() {
        if v >= problem.num_vars() {
            return Err(format!(
                "formula uses variable {v} but only {} are declared",
                problem.num_vars()
            ));
        }
    }
    if opts.mode == Mode::Forward && matches!(opts.engine, Engine::Ic3 | Engine::Explicit) {
        return Err("this engine needs the reversed encoding (mode=reversed)".into());
    }

    let ctrl = match opts.timeout {
        Some(t) => Control::with_deadline(Instant::now() + t),
        None => Control::unlimited(),
    };
    let compile = |mode: Mode| -> Result<TransitionSystem, String> {
        let bfa = compile_problem(problem, mode).map_err(|e| e.to_string())?;
        Ok(TransitionSystem::encode(&bfa))
    };

    let (result, engine, depth, ts) = match opts.engine {
        Engine::Bmc => {
            let ts = compile(opts.mode)?;
            let (r, k) = bmc::check(&ts, opts.max_bound, &ctrl);
            (r, "bmc", k, ts)
        }
        Engine::Ic3 => {
            let ts = compile(Mode::Reversed)?;
            let (r, k) = ic3::check(&ts, opts.max_frames, &ctrl);
            (r, "ic3", k, ts)
        }
        Engine::Explicit => {
            let ts = compile(Mode::Reversed)?;
            let (r, n) = explicit::check(&ts, opts.state_limit, &ctrl);
            (r, "explicit", n, ts)
        }
        Engine::Portfolio => {
            let rev = compile(Mode::Reversed)?;
            if opts.mode == Mode::Reversed {
                let (r, e, d) =
                    portfolio::check(&rev, &rev, opts.max_bound, opts.max_frames, &ctrl);
                (r, e, d, rev)
            } else {
                let fwd = compile(Mode::Forward)?;
                let (r, e, d) =
                    portfolio::check(&rev, &fwd, opts.max_bound, opts.max_frames, &ctrl);
                let ts = if e == portfolio::ENGINE_BMC { fwd } else { rev };
                (r, e, d, ts)
            }
        }
    };

    let solution = match result {
        CheckResult::Reachable(trace) => {
            verify_trace(&ts, &trace).map_err(|e| format!("rejected own trace: {e}"))?;
            let words = decode_witness(&ts, &trace)?;
            if !problem.formula.evaluate(&words) {
                return Err("decoded witness fails the formula".into());
            }
            let named = problem.var_names.iter().cloned().zip(words).collect();
            Solution {
                status: Status::Sat,
                witness: Some(named),
                engine,
                depth,
                elapsed: start.elapsed(),
            }
        }
        CheckResult::Unreachable(cert) => {
            if let Certificate::Inductive(inv) = &cert {
                verify_invariant(&ts, inv)
                    .map_err(|e| format!("rejected own invariant: {e}"))?;
            }
            Solution {
                status: Status::Unsat,
                witness: None,
                engine,
                depth,
                elapsed: start.elapsed(),
            }
        }
        CheckResult::Unknown(reason) => Solution {
            status: Status::Unknown(reason),
            witness: None,
            engine,
            depth,
            elapsed: start.elapsed(),
        },
    };
    Ok(solution)
}

/// Reads one byte string per variable off the run's input track:
/// each track must look like `start-mark⁺ bytes end-mark⁺`, and the
/// bytes are the word.
pub fn decode_witness(
    ts: &TransitionSystem,
    trace: &Trace,
) -> Result<Vec<Vec<u8>>, String> {
    let mut words = Vec::with_capacity(ts.num_vars);
    for v in 0..ts.num_vars {
        let syms: Vec<u16> =
            trace.inputs.iter().map(|step| ts.input_symbol(step, v)).collect();
        let start = syms.iter().take_while(|&&s| s == SIGMA_START).count();
        let end = syms.iter().rev().take_while(|&&s| s == SIGMA_END).count();
        if start == 0 || end == 0 || start + end > syms.len() {
            return Err(format!("track {v} is not padded: {syms:?}"));
        }
        let middle = &syms[start..syms.len() - end];
        let mut word = Vec::with_capacity(middle.len());
        for &s in middle {
            if s > 0xff {
                return Err(format!("track {v} has a stray mark inside the word: {syms:?}"));
            }
            word.push(s as u8);
        }
        words.push(word);
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::{parse_regex, ParseOptions};
    use crate::smt::Formula;

    fn member(var: usize, pattern: &str) -> Formula {
        Formula::Member {
            var,
            regex: parse_regex(pattern, ParseOptions::default()).unwrap(),
            pattern: pattern.to_string(),
        }
    }

    fn problem(num_vars: usize, formula: Formula) -> Problem {
        Problem {
            var_names: (0..num_vars).map(|i| format!("v{i}")).collect(),
            formula,
        }
    }

    fn opts(engine: Engine, mode: Mode) -> SolverOptions {
        SolverOptions { engine, mode, ..SolverOptions::default() }
    }

    #[test]
    fn every_engine_solves_a_simple_sat_problem() {
        let p = problem(1, member(0, "^a(b|c)d$"));
        let combos = [
            (Engine::Bmc, Mode::Forward),
            (Engine::Bmc, Mode::Reversed),
            (Engine::Ic3, Mode::Reversed),
            (Engine::Explicit, Mode::Reversed),
            (Engine::Portfolio, Mode::Forward),
            (Engine::Portfolio, Mode::Reversed),
        ];
        for (engine, mode) in combos {
            let s = solve(&p, &opts(engine, mode)).unwrap();
            assert_eq!(s.status, Status::Sat, "{engine:?}/{mode:?}");
            let witness = s.witness.unwrap();
            assert_eq!(witness.len(), 1);
            let (name, word) = &witness[0];
            assert_eq!(name, "v0");
            assert!(word == b"abd" || word == b"acd", "{word:?}");
        }
    }

    #[test]
    fn deciding_engines_prove_unsat() {
        let p = problem(1, Formula::And(vec![member(0, "^a+$"), member(0, "^b+$")]));
        for engine in [Engine::Ic3, Engine::Explicit, Engine::Portfolio] {
            let s = solve(&p, &opts(engine, Mode::Reversed)).unwrap();
            assert_eq!(s.status, Status::Unsat, "{engine:?}");
            assert!(s.witness.is_none());
        }
    }

    #[test]
    fn bounded_engine_alone_reports_unknown_on_unsat() {
        let p = problem(1, Formula::And(vec![member(0, "^a+$"), member(0, "^b+$")]));
        let mut o = opts(Engine::Bmc, Mode::Reversed);
        o.max_bound = 6;
        let s = solve(&p, &o).unwrap();
        assert!(matches!(s.status, Status::Unknown(_)), "{:?}", s.status);
    }

    #[test]
    fn incompatible_engine_mode_pairs_are_rejected() {
        let p = problem(1, member(0, "a"));
        for engine in [Engine::Ic3, Engine::Explicit] {
            assert!(solve(&p, &opts(engine, Mode::Forward)).is_err());
        }
    }

    #[test]
    fn undeclared_variables_are_rejected() {
        let p = Problem { var_names: vec!["x".into()], formula: member(1, "a") };
        assert!(solve(&p, &SolverOptions::default()).is_err());
    }

    #[test]
    fn variable_free_problems_fold_to_constants() {
        let t = Problem { var_names: vec![], formula: Formula::And(vec![]) };
        let s = solve(&t, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, Status::Sat);
        assert_eq!(s.witness, Some(vec![]));

        let f = Problem {
            var_names: vec![],
            formula: Formula::Not(Box::new(Formula::And(vec![]))),
        };
        let s = solve(&f, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, Status::Unsat);
    }

    #[test]
    fn timeout_yields_unknown_not_hang() {
        // A conjunction of misaligned period constraints with no short
        // model; a zero-length budget must come back immediately.
        let p = problem(
            1,
            Formula::And(vec![member(0, "^(aaaaaaa)+$"), member(0, "^(aaaaaaaaaaa)+$")]),
        );
        let mut o = opts(Engine::Portfolio, Mode::Reversed);
        o.timeout = Some(Duration::from_millis(0));
        let s = solve(&p, &o).unwrap();
        assert!(matches!(s.status, Status::Unknown(_)), "{:?}", s.status);
    }

    #[test]
    fn multi_variable_witnesses_decode_per_variable() {
        let p = problem(
            2,
            Formula::And(vec![
                member(0, "^(ab)+$"),
                member(1, "^c?d$"),
                Formula::Not(Box::new(member(0, "^ab$"))),
            ]),
        );
        let s = solve(&p, &opts(Engine::Portfolio, Mode::Reversed)).unwrap();
        assert_eq!(s.status, Status::Sat);
        let witness = s.witness.unwrap();
        let w0 = &witness[0].1;
        let w1 = &witness[1].1;
        assert!(w0.len() >= 4 && w0.chunks(2).all(|c| c == b"ab"), "{w0:?}");
        assert!(w1 == b"d" || w1 == b"cd");
    }
}
