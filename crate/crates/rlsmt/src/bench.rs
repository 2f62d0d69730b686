//! Scaling benchmark families over the binary alphabet.
//!
//! All four families pin down the symbol `n` positions from the *end*
//! of the word — easy for an automaton run backward (the constraint
//! sits right at its start) and exponential for forward subset-style
//! reasoning, so they are a direct probe of what the reversed encoding
//! buys.  Two families are satisfiable and two are contradictions, one
//! of each phrased with a negation and one as a plain conjunction.

use std::time::Instant;

use crate::regex::{parse_regex, ParseOptions, RegexError};
use crate::smt::{Formula, Problem};
use crate::solver::{solve, SolverOptions, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// nth-from-end is 1, and not (n−1 th-from-end is 0): satisfiable.
    SatDiff,
    /// Two fixed 1s near the end, minus a weaker consequence of them:
    /// unsatisfiable.
    UnsatDiff,
    /// Two compatible fixed positions: satisfiable.
    SatInt,
    /// The same position forced to 0 and 1 at once: unsatisfiable.
    UnsatInt,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::SatDiff, Family::UnsatDiff, Family::SatInt, Family::UnsatInt];

    pub fn name(self) -> &'static str {
        match self {
            Family::SatDiff => "sat-diff",
            Family::UnsatDiff => "unsat-diff",
            Family::SatInt => "sat-int",
            Family::UnsatInt => "unsat-int",
        }
    }

    pub fn by_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn expected_sat(self) -> bool {
        matches!(self, Family::SatDiff | Family::SatInt)
    }

    /// Instance of size `n`: the patterns pin symbols `n` (and `n±1`)
    /// positions from the end of a `[01]*` word.
    pub fn problem(self, n: usize) -> Problem {
        assert!((1..=64).contains(&n), "family sizes range over 1..=64");
        let member = |pattern: String| Formula::Member {
            var: 0,
            regex: parse_regex(&pattern, ParseOptions::default())
                .expect("family patterns are well-formed"),
            pattern,
        };
        let tail = |prefix: &str, k: usize| format!("^[01]*{prefix}[01]{{{k}}}$");
        let formula = match self {
            Family::SatDiff => Formula::And(vec![
                member(tail("1", n)),
                Formula::Not(Box::new(member(tail("0", n - 1)))),
            ]),
            Family::UnsatDiff => Formula::And(vec![
                member(tail("11", n)),
                Formula::Not(Box::new(member(tail("1", n + 1)))),
            ]),
            Family::SatInt => {
                Formula::And(vec![member(tail("1", n)), member(tail("0", n - 1))])
            }
            Family::UnsatInt => {
                Formula::And(vec![member(tail("1", n)), member(tail("0", n))])
            }
        };
        Problem { var_names: vec!["w".into()], formula }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub family: &'static str,
    pub n: usize,
    pub status: Status,
    pub time_ms: u128,
    pub engine: &'static str,
    pub depth: usize,
}

pub const CSV_HEADER: &str = "family,n,status,time_ms,engine,bound_or_frames";

pub fn csv_line(row: &BenchRow) -> String {
    let status = match &row.status {
        Status::Sat => "sat",
        Status::Unsat => "unsat",
        Status::Unknown(_) => "unknown",
    };
    format!(
        "{},{},{},{},{},{}",
        row.family, row.n, status, row.time_ms, row.engine, row.depth
    )
}

/// Runs each family at sizes `n_min..=n_max`, streaming rows to
/// `progress` as they finish.  Per-instance failures become `unknown`
/// rows; the run keeps going.
pub fn run_families(
    families: &[Family],
    n_min: usize,
    n_max: usize,
    opts: &SolverOptions,
    progress: &mut dyn FnMut(&BenchRow),
) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &family in families {
        for n in n_min..=n_max {
            let problem = family.problem(n);
            let row = timed_solve(family.name(), n, &problem, opts);
            progress(&row);
            rows.push(row);
        }
    }
    rows
}

fn timed_solve(
    family: &'static str,
    n: usize,
    problem: &Problem,
    opts: &SolverOptions,
) -> BenchRow {
    let start = Instant::now();
    let (status, engine, depth) = match solve(problem, opts) {
        Ok(s) => (s.status, s.engine, s.depth),
        Err(e) => (Status::Unknown(e), "error", 0),
    };
    BenchRow { family, n, status, time_ms: start.elapsed().as_millis(), engine, depth }
}

/// The two pairwise drills over a regex list: does some string match
/// both expressions, or match one but not the other?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOp {
    Intersect,
    Difference,
}

impl PairOp {
    pub fn name(self) -> &'static str {
        match self {
            PairOp::Intersect => "pairs-intersect",
            PairOp::Difference => "pairs-difference",
        }
    }
}

/// Solves `x ∈ L_i ∧ x ∈ L_j` (intersect, unordered pairs) or
/// `x ∈ L_i ∧ ¬(x ∈ L_j)` (difference, ordered pairs) for every pair
/// from the list.  The row's `n` is the 1-based pair index; a regex
/// that fails to parse turns its pairs into `unknown` rows.
pub fn run_pairs(
    regexes: &[String],
    op: PairOp,
    opts: &SolverOptions,
    progress: &mut dyn FnMut(&BenchRow),
) -> Vec<BenchRow> {
    let parsed: Vec<Result<(), RegexError>> = regexes
        .iter()
        .map(|r| parse_regex(r, ParseOptions::default()).map(|_| ()))
        .collect();
    let mut rows = Vec::new();
    let mut index = 0;
    for i in 0..regexes.len() {
        let j_start = match op {
            PairOp::Intersect => i + 1,
            PairOp::Difference => 0,
        };
        for j in j_start..regexes.len() {
            if j == i {
                continue;
            }
            index += 1;
            let row = match (&parsed[i], &parsed[j]) {
                (Ok(()), Ok(())) => {
                    let problem = pair_problem(&regexes[i], &regexes[j], op);
                    timed_solve(op.name(), index, &problem, opts)
                }
                (Err(e), _) | (_, Err(e)) => BenchRow {
                    family: op.name(),
                    n: index,
                    status: Status::Unknown(format!("bad regex: {e}")),
                    time_ms: 0,
                    engine: "error",
                    depth: 0,
                },
            };
            progress(&row);
            rows.push(row);
        }
    }
    rows
}

fn pair_problem(left: &str, right: &str, op: PairOp) -> Problem {
    let member = |pattern: &str| Formula::Member {
        var: 0,
        regex: parse_regex(pattern, ParseOptions::default()).expect("pre-validated"),
        pattern: pattern.to_string(),
    };
    let rhs = match op {
        PairOp::Intersect => member(right),
        PairOp::Difference => Formula::Not(Box::new(member(right))),
    };
    Problem {
        var_names: vec!["x".into()],
        formula: Formula::And(vec![member(left), rhs]),
    }
}
