//! Using the solver as a library: build a formula in code (no text
//! format), solve it, and inspect the verdict.
//!
//!     cargo run --example embed

use rlsmt::regex::{parse_regex, ParseOptions};
use rlsmt::smt::{Formula, Problem};
use rlsmt::solver::{solve, SolverOptions, Status};

fn member(var: usize, pattern: &str) -> Formula {
    Formula::Member {
        var,
        regex: parse_regex(pattern, ParseOptions::default()).unwrap(),
        pattern: pattern.to_string(),
    }
}

fn main() {
    // Two variables, two constraints each; the conjunction forces the
    // shortest lengths divisible by 2 and 3 respectively.
    let problem = Problem {
        var_names: vec!["x".into(), "y".into()],
        formula: Formula::And(vec![
            member(0, "(ab)+"),
            Formula::Not(Box::new(member(0, "ab"))),
            member(1, "(abc)+"),
        ]),
    };

    let solution = solve(&problem, &SolverOptions::default()).unwrap();
    match solution.status {
        Status::Sat => {
            for (name, word) in solution.witness.as_deref().unwrap_or_default() {
                println!("{name} = {:?}", String::from_utf8_lossy(word));
            }
        }
        Status::Unsat => println!("unsat"),
        Status::Unknown(why) => println!("unknown: {why}"),
    }
    println!(
        "; engine={} depth={} time={}ms",
        solution.engine,
        solution.depth,
        solution.elapsed.as_millis()
    );
}
