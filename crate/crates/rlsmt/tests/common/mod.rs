//! Shared helpers for the integration suites: a seeded generator for
//! small membership problems and an enumeration oracle that decides
//! them by brute force, independently of the automaton pipeline.

// Each test target pulls in a different slice of this module.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rlsmt::regex::{parse_regex, regex_match, Ast, ParseOptions};
use rlsmt::smt::{Formula, Problem};

/// Bytes the generated patterns are written over.
pub const ALPHABET: &[u8] = b"abc";

/// One byte no generated pattern mentions.  Every byte outside the
/// pattern alphabet drives identical class tests (the generator emits
/// no `.`, escapes, or word boundaries), so this single representative
/// covers the whole complement that negations can reach for.
pub const OUTSIDE: u8 = b'd';

/// Payload length ceiling for the enumeration oracle.
pub const MAX_PAYLOAD: usize = 8;

// ---------------------------------------------------------------------
// Problem generator
// ---------------------------------------------------------------------

/// A random membership problem: one or two variables, up to three
/// membership literals under random connectives, patterns of at most
/// twelve syntax nodes over a three-byte alphabet.
pub fn gen_problem(rng: &mut impl Rng) -> Problem {
    let num_vars = rng.gen_range(1..=2);
    let num_atoms = rng.gen_range(1..=3);

    let mut atoms = Vec::with_capacity(num_atoms);
    for _ in 0..num_atoms {
        let var = rng.gen_range(0..num_vars);
        let pattern = gen_pattern(rng);
        let regex = parse_regex(&pattern, ParseOptions::default())
            .unwrap_or_else(|e| panic!("generator produced an unparsable pattern {pattern:?}: {e}"));
        atoms.push(Formula::Member { var, regex, pattern });
    }

    let mut formula = atoms.pop().unwrap();
    for atom in atoms {
        let rhs = if rng.gen_bool(0.4) { Formula::Not(Box::new(atom)) } else { atom };
        formula = match rng.gen_range(0..2) {
            0 => Formula::And(vec![formula, rhs]),
            _ => Formula::Or(vec![formula, rhs]),
        };
    }
    if rng.gen_bool(0.2) {
        formula = Formula::Not(Box::new(formula));
    }

    let var_names = ["x", "y"][..num_vars].iter().map(|s| s.to_string()).collect();
    Problem { var_names, formula }
}

/// One pattern string of at most twelve syntax nodes.  Regenerates
/// until the minimum match length fits inside the oracle horizon, so
/// satisfiable conjunctions rarely need witnesses the oracle cannot
/// see.
pub fn gen_pattern(rng: &mut impl Rng) -> String {
    loop {
        let mut budget = 12usize;
        let pat = gen_pat(rng, &mut budget, true);
        let text = render(&pat, false);
        let ast = parse_regex(&text, ParseOptions::default())
            .unwrap_or_else(|e| panic!("generator produced an unparsable pattern {text:?}: {e}"));
        match ast.min_match_len() {
            Some(l) if l <= MAX_PAYLOAD / 2 => return text,
            _ => continue,
        }
    }
}

enum Pat {
    Lit(u8),
    Class { negated: bool, bytes: Vec<u8> },
    Anchor(char),
    Concat(Vec<Pat>),
    Alt(Vec<Pat>),
    Star(Box<Pat>),
    Plus(Box<Pat>),
    Opt(Box<Pat>),
    Repeat(Box<Pat>, u32, Option<u32>),
}

fn gen_pat(rng: &mut impl Rng, budget: &mut usize, top: bool) -> Pat {
    if *budget == 0 {
        return gen_leaf(rng);
    }
    *budget -= 1;
    // Compound shapes get likelier with more budget left.
    let compound = rng.gen_range(0..12) < (*budget).min(8);
    if !compound {
        return gen_leaf(rng);
    }
    match rng.gen_range(0..8) {
        0 | 1 => {
            let n = rng.gen_range(2..=3);
            Pat::Concat((0..n).map(|_| gen_pat(rng, budget, false)).collect())
        }
        2 | 3 => {
            let n = rng.gen_range(2..=3);
            Pat::Alt((0..n).map(|_| gen_pat(rng, budget, false)).collect())
        }
        4 => Pat::Star(Box::new(gen_pat(rng, budget, false))),
        5 => Pat::Plus(Box::new(gen_pat(rng, budget, false))),
        6 => Pat::Opt(Box::new(gen_pat(rng, budget, false))),
        _ => {
            let min = rng.gen_range(if top { 1 } else { 0 }..=2);
            let max = match rng.gen_range(0..3) {
                0 => None,
                _ => Some(rng.gen_range(min.max(1)..=3)),
            };
            Pat::Repeat(Box::new(gen_pat(rng, budget, false)), min, max)
        }
    }
}

fn gen_leaf(rng: &mut impl Rng) -> Pat {
    match rng.gen_range(0..10) {
        // Plain literals dominate so concatenations stay meaningful.
        0..=5 => Pat::Lit(ALPHABET[rng.gen_range(0..ALPHABET.len())]),
        6 | 7 => {
            let negated = rng.gen_bool(0.3);
            let mut bytes: Vec<u8> =
                ALPHABET.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if bytes.is_empty() {
                bytes.push(ALPHABET[rng.gen_range(0..ALPHABET.len())]);
            }
            Pat::Class { negated, bytes }
        }
        8 => Pat::Anchor(if rng.gen_bool(0.5) { '^' } else { '$' }),
        _ => Pat::Concat(Vec::new()), // empty pattern
    }
}

/// Renders with explicit groups wherever precedence requires them.
fn render(pat: &Pat, atom_position: bool) -> String {
    let text = match pat {
        Pat::Lit(b) => (*b as char).to_string(),
        Pat::Class { negated, bytes } => {
            let mut s = String::from("[");
            if *negated {
                s.push('^');
            }
            for &b in bytes {
                s.push(b as char);
            }
            s.push(']');
            s
        }
        Pat::Anchor(c) => c.to_string(),
        Pat::Concat(parts) => {
            parts.iter().map(|p| render(p, matches!(p, Pat::Alt(_)))).collect()
        }
        Pat::Alt(parts) => {
            parts.iter().map(|p| render(p, false)).collect::<Vec<_>>().join("|")
        }
        Pat::Star(inner) => format!("{}*", render(inner, true)),
        Pat::Plus(inner) => format!("{}+", render(inner, true)),
        Pat::Opt(inner) => format!("{}?", render(inner, true)),
        Pat::Repeat(inner, min, max) => {
            let counts = match max {
                Some(max) if max == min => format!("{{{min}}}"),
                Some(max) => format!("{{{min},{max}}}"),
                None => format!("{{{min},}}"),
            };
            format!("{}{}", render(inner, true), counts)
        }
    };
    let single = matches!(pat, Pat::Lit(_) | Pat::Class { .. });
    if atom_position && !single {
        format!("({text})")
    } else {
        text
    }
}

// ---------------------------------------------------------------------
// Enumeration oracle
// ---------------------------------------------------------------------

/// Decides the problem by enumerating words per variable, without any
/// automata: every payload over `ALPHABET` plus `OUTSIDE` up to
/// `MAX_PAYLOAD` bytes.  A formula only sees its variables through the
/// membership atoms, so each variable is summarised by the set of atom
/// truth vectors its words can realise — the cross product of those
/// small sets replaces the cross product of the word spaces.
///
/// Returns a satisfying assignment (shortest representatives) or None
/// if no assignment within the horizon works.
pub fn brute_force(problem: &Problem) -> Option<Vec<Vec<u8>>> {
    brute_force_over(problem, ALPHABET, OUTSIDE)
}

/// Same enumeration over a caller-chosen pattern alphabet and outside
/// representative — for problems written over other byte sets.
pub fn brute_force_over(
    problem: &Problem,
    alphabet: &[u8],
    outside: u8,
) -> Option<Vec<Vec<u8>>> {
    let num_vars = problem.num_vars();
    let mut atom_vars: Vec<usize> = Vec::new();
    let mut atom_asts: Vec<&Ast> = Vec::new();
    problem.formula.for_each_member(&mut |var, ast| {
        atom_vars.push(var);
        atom_asts.push(ast);
    });

    // Positions of each variable's atoms in formula order.
    let slots: Vec<Vec<usize>> = (0..num_vars)
        .map(|v| (0..atom_vars.len()).filter(|&i| atom_vars[i] == v).collect())
        .collect();

    let profiles: Vec<Vec<(Vec<bool>, Vec<u8>)>> = (0..num_vars)
        .map(|v| {
            let asts: Vec<&Ast> = slots[v].iter().map(|&i| atom_asts[i]).collect();
            var_profiles(&asts, alphabet, outside)
        })
        .collect();

    // Try every combination of realisable vectors.
    let mut choice = vec![0usize; num_vars];
    loop {
        let mut truths = vec![false; atom_vars.len()];
        for v in 0..num_vars {
            let (vector, _) = &profiles[v][choice[v]];
            for (k, &slot) in slots[v].iter().enumerate() {
                truths[slot] = vector[k];
            }
        }
        let mut cursor = 0;
        if eval_by_atoms(&problem.formula, &truths, &mut cursor) {
            let words: Vec<Vec<u8>> =
                (0..num_vars).map(|v| profiles[v][choice[v]].1.clone()).collect();
            debug_assert!(problem.formula.evaluate(&words));
            return Some(words);
        }
        let mut place = 0;
        loop {
            if place == num_vars {
                return None;
            }
            choice[place] += 1;
            if choice[place] < profiles[place].len() {
                break;
            }
            choice[place] = 0;
            place += 1;
        }
    }
}

/// All atom truth vectors one variable's words can realise within the
/// horizon, with the shortest word found for each.  Enumeration goes
/// by length, and stops early once every vector is accounted for.
fn var_profiles(asts: &[&Ast], alphabet: &[u8], outside: u8) -> Vec<(Vec<bool>, Vec<u8>)> {
    let alphabet: Vec<u8> = alphabet.iter().copied().chain([outside]).collect();
    let mut seen: HashMap<Vec<bool>, Vec<u8>> = HashMap::new();
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    let mut order: Vec<Vec<bool>> = Vec::new();
    for len in 0..=MAX_PAYLOAD {
        for word in &level {
            let vector: Vec<bool> = asts.iter().map(|ast| regex_match(ast, word)).collect();
            if !seen.contains_key(&vector) {
                seen.insert(vector.clone(), word.clone());
                order.push(vector);
            }
        }
        if seen.len() == 1 << asts.len() {
            break;
        }
        if len < MAX_PAYLOAD {
            level = level
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |&b| {
                        let mut w2 = w.clone();
                        w2.push(b);
                        w2
                    })
                })
                .collect();
        }
    }
    order.into_iter().map(|vec| { let word = seen[&vec].clone(); (vec, word) }).collect()
}

/// Evaluates with atom truths supplied positionally, in the same
/// left-to-right order `for_each_member` visits them.  Children are
/// always traversed so the cursor stays aligned.
fn eval_by_atoms(f: &Formula, truths: &[bool], cursor: &mut usize) -> bool {
    match f {
        Formula::And(kids) => {
            let mut all = true;
            for k in kids {
                all &= eval_by_atoms(k, truths, cursor);
            }
            all
        }
        Formula::Or(kids) => {
            let mut any = false;
            for k in kids {
                any |= eval_by_atoms(k, truths, cursor);
            }
            any
        }
        Formula::Not(inner) => !eval_by_atoms(inner, truths, cursor),
        Formula::Member { .. } => {
            let v = truths[*cursor];
            *cursor += 1;
            v
        }
    }
}

// ---------------------------------------------------------------------
// Solver plumbing
// ---------------------------------------------------------------------

/// Solves with the default portfolio configuration.
pub fn solve_default(problem: &Problem) -> rlsmt::solver::Solution {
    rlsmt::solver::solve(problem, &rlsmt::solver::SolverOptions::default())
        .unwrap_or_else(|e| panic!("solver error: {e}"))
}

/// True when every witness payload fits inside the oracle horizon, so
/// the oracle's verdict is authoritative.
pub fn within_horizon(witness: &[(String, Vec<u8>)]) -> bool {
    witness.iter().all(|(_, w)| w.len() <= MAX_PAYLOAD)
}
