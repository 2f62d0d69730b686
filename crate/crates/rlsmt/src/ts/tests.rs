use super::*;
use crate::bfa::bfa_accepts;
use crate::logic::Arena;
use crate::regex::{parse_regex, ParseOptions};
use crate::smt::{compile_problem, Formula, Mode, Problem};
use crate::symbols::{RangeSet, SIGMA_END, SYMBOL_BITS};

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

fn padded_tuple(words: &[Vec<u8>]) -> Vec<Vec<Symbol>> {
    let max = words.iter().map(Vec::len).max().unwrap_or(0);
    words
        .iter()
        .map(|w| {
            let mut p = vec![SIGMA_START];
            p.extend(w.iter().map(|&b| b as Symbol));
            p.extend(std::iter::repeat(SIGMA_END).take(max - w.len() + 1));
            p
        })
        .collect()
}

fn words_up_to(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &b in alphabet {
                let mut w2 = w.clone();
                w2.push(b);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[test]
fn comparator_circuits_are_exact() {
    let sets = [
        RangeSet::singleton(97),
        RangeSet::all_bytes(),
        RangeSet::singleton(256),
        RangeSet::from_ranges(vec![(97, 99), (200, 210), (257, 257)]),
        RangeSet::singleton(0),
        RangeSet::range(0, 257),
        RangeSet::empty(),
    ];
    let mut arena = Arena::new();
    let bits: Vec<_> = (0..SYMBOL_BITS as u32).map(|i| arena.var(i)).collect();
    for set in &sets {
        let circuit = range_circuit(&mut arena, &bits, set);
        for value in 0u16..512 {
            let got = arena.eval(circuit, &|v| (value >> v) & 1 == 1);
            assert_eq!(got, set.contains(value), "set {set} value {value}");
        }
    }
}

#[test]
fn latch_and_input_counts() {
    // Regex automaton sizes: "a" has 4 states after extension and
    // elimination (pre, two chain states, sink), the universal
    // conjunct adds 3 per variable.
    let p1 = problem(1, member(0, "a"));
    for mode in [Mode::Forward, Mode::Reversed] {
        let bfa = compile_problem(&p1, mode).unwrap();
        assert_eq!(bfa.states.len(), 7);
        let ts = TransitionSystem::encode(&bfa);
        assert_eq!(ts.num_latches(), 7 + SYMBOL_BITS);
        assert_eq!(ts.num_inputs(), SYMBOL_BITS);
        assert_eq!(ts.is_functional(), mode == Mode::Reversed);
    }
    let p2 = problem(2, Formula::And(vec![member(0, "a"), member(1, "b")]));
    let bfa = compile_problem(&p2, Mode::Reversed).unwrap();
    let ts = TransitionSystem::encode(&bfa);
    assert_eq!(ts.num_latches(), bfa.states.len() + 2 * SYMBOL_BITS);
    assert_eq!(ts.num_inputs(), 2 * SYMBOL_BITS);
}

#[test]
fn input_symbol_roundtrip() {
    let bfa = compile_problem(&problem(2, member(1, "x")), Mode::Reversed).unwrap();
    let ts = TransitionSystem::encode(&bfa);
    for syms in [[0u16, 257], [256, 97], [255, 42]] {
        let inputs = ts.inputs_for_symbols(&syms);
        assert_eq!(ts.input_symbol(&inputs, 0), syms[0]);
        assert_eq!(ts.input_symbol(&inputs, 1), syms[1]);
    }
}

/// The functional system consumes the forward padded tuple and must
/// reach bad exactly for satisfying assignments.
#[test]
fn functional_simulation_matches_semantics() {
    let formulas = [
        member(0, "a(b|c)*"),
        Formula::Not(Box::new(member(0, "(ab)*"))),
        Formula::Or(vec![member(0, "^ab"), member(0, "ba$")]),
        Formula::And(vec![member(0, "[ab]+"), Formula::Not(Box::new(member(0, r"\ba[ab]*")))]),
    ];
    for formula in &formulas {
        let p = problem(1, formula.clone());
        let bfa = compile_problem(&p, Mode::Reversed).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        for word in words_up_to(b"abc", 4) {
            let tuple = padded_tuple(std::slice::from_ref(&word));
            let expected = formula.evaluate(std::slice::from_ref(&word));
            assert_eq!(bfa_accepts(&bfa, &tuple).unwrap(), expected, "bfa acceptance");
            let mut latches = ts.initial_latches();
            // The universal conjunct needs at least two steps before
            // its end marker flag can rise, so reset is never bad.
            assert!(!ts.bad_at(&latches), "bad holds at reset");
            for i in 0..tuple[0].len() {
                let syms: Vec<Symbol> = tuple.iter().map(|t| t[i]).collect();
                latches = ts.simulate_step(&latches, &ts.inputs_for_symbols(&syms));
            }
            assert_eq!(
                ts.bad_at(&latches),
                expected,
                "word {:?}",
                String::from_utf8_lossy(&word)
            );
        }
    }
}

#[test]
fn functional_two_variable_simulation() {
    let formula = Formula::Or(vec![
        Formula::And(vec![member(0, "a+"), member(1, "b+")]),
        Formula::Not(Box::new(member(1, "(ab)*"))),
    ]);
    let p = problem(2, formula.clone());
    let bfa = compile_problem(&p, Mode::Reversed).unwrap();
    let ts = TransitionSystem::encode(&bfa);
    let words = words_up_to(b"ab", 2);
    for x in &words {
        for y in &words {
            let raw = vec![x.clone(), y.clone()];
            let tuple = padded_tuple(&raw);
            let mut latches = ts.initial_latches();
            for i in 0..tuple[0].len() {
                let syms: Vec<Symbol> = tuple.iter().map(|t| t[i]).collect();
                latches = ts.simulate_step(&latches, &ts.inputs_for_symbols(&syms));
            }
            assert_eq!(ts.bad_at(&latches), formula.evaluate(&raw));
        }
    }
}

/// Register bits are plain latches of the previous input.
#[test]
fn history_register_tracks_input()  {
    let bfa = compile_problem(&problem(1, member(0, "ab*")), Mode::Reversed).unwrap();
    let ts = TransitionSystem::encode(&bfa);
    let mut latches = ts.initial_latches();
    let reg = |l: &Vec<bool>| {
        let mut sym = 0u16;
        for b in (0..SYMBOL_BITS).rev() {
            sym = (sym << 1) | l[ts.num_state_bits + b] as u16;
        }
        sym
    };
    assert_eq!(reg(&latches), SIGMA_START);
    for sym in [SIGMA_START, 97, 98, SIGMA_END] {
        latches = ts.simulate_step(&latches, &ts.inputs_for_symbols(&[sym]));
        assert_eq!(reg(&latches), sym);
    }
}

/// Junk inputs past the end mark drive every automaton track dead, so
/// bad stays unreachable through them.
#[test]
fn junk_symbols_never_reach_bad() {
    let bfa = compile_problem(&problem(1, Formula::Not(Box::new(member(0, "a")))), Mode::Reversed)
        .unwrap();
    let ts = TransitionSystem::encode(&bfa);
    for junk in [258u16, 300, 511] {
        let mut latches = ts.initial_latches();
        for sym in [SIGMA_START, junk, SIGMA_END] {
            latches = ts.simulate_step(&latches, &ts.inputs_for_symbols(&[sym]));
            assert!(!ts.bad_at(&latches), "junk {junk}");
        }
    }
}

/// Validates the relational shape without a solver: the backward
/// acceptance evaluation yields a latch assignment sequence that must
/// satisfy init (iff accepted), every step constraint, and bad at the
/// end; flipping any state bit must break the step it feeds.
#[test]
fn relational_constraints_certify_backward_evaluation() {
    let formulas = [
        member(0, "a(b|c)*"),
        Formula::Or(vec![member(0, "^ab"), member(0, "ba$")]),
        Formula::Not(Box::new(member(0, "(ab)*"))),
    ];
    for formula in &formulas {
        let p = problem(1, formula.clone());
        let bfa = compile_problem(&p, Mode::Forward).unwrap();
        let ts = TransitionSystem::encode(&bfa);
        let TsKind::Relational { init, step } = &ts.kind else { panic!() };
        for word in words_up_to(b"ab", 3) {
            let tuple = padded_tuple(std::slice::from_ref(&word));
            let len = tuple[0].len();
            let expected = formula.evaluate(std::slice::from_ref(&word));

            // Backward state-bit values, then full latch vectors with
            // the register tracking the previous symbol.
            let mut state_values: Vec<Vec<bool>> = vec![Vec::new(); len + 1];
            state_values[len] = bfa.states.iter().map(|s| s.accepting).collect();
            for i in (0..len).rev() {
                let next = state_values[i + 1].clone();
                state_values[i] = (0..bfa.states.len())
                    .map(|q| {
                        let track = &tuple[bfa.states[q].var];
                        let prev = if i == 0 { SIGMA_START } else { track[i - 1] };
                        bfa.delta[q].iter().any(|alt| {
                            alt.ranges.contains(track[i])
                                && alt.guard.eval(prev, track[i])
                                && bfa.arena.eval(alt.target, &|v| next[v as usize])
                        })
                    })
                    .collect();
            }
            let latches_at = |i: usize| -> Vec<bool> {
                let mut l = state_values[i].clone();
                for v in 0..ts.num_vars {
                    let reg = if i == 0 { SIGMA_START } else { tuple[v][i - 1] };
                    for b in 0..SYMBOL_BITS {
                        l.push((reg >> b) & 1 == 1);
                    }
                }
                l
            };

            let eval_init = ts.arena.eval(*init, &|v| match unpack_var(v) {
                TsVar::Latch(i) => latches_at(0)[i],
                _ => unreachable!(),
            });
            assert_eq!(eval_init, expected, "init iff accepted");
            assert!(ts.bad_at(&latches_at(len)), "bad at the final assignment");

            for i in 0..len {
                let cur = latches_at(i);
                let nxt = latches_at(i + 1);
                let syms: Vec<Symbol> = tuple.iter().map(|t| t[i]).collect();
                let inputs = ts.inputs_for_symbols(&syms);
                let eval_step = |cur: &[bool]| {
                    ts.arena.eval(*step, &|v| match unpack_var(v) {
                        TsVar::Latch(j) => cur[j],
                        TsVar::Input(j) => inputs[j],
                        TsVar::NextLatch(j) => nxt[j],
                    })
                };
                assert!(eval_step(&cur), "step {i} holds");
                for q in 0..ts.num_state_bits {
                    let mut flipped = cur.clone();
                    flipped[q] = !flipped[q];
                    assert!(!eval_step(&flipped), "flipping bit {q} at step {i}");
                }
            }
        }
    }
}

/// Equivalence classes: symbols sharing a block fire exactly the same
/// alternatives everywhere.
#[test]
fn input_classes_are_bisimulation_blocks() {
    let p = problem(1, Formula::And(vec![member(0, "[a-m]x*"), member(0, r"\b[a-z]+")]));
    let bfa = compile_problem(&p, Mode::Reversed).unwrap();
    let ts = TransitionSystem::encode(&bfa);
    let reps = &ts.input_classes[0];
    assert!(reps.len() < 20, "partition stays coarse: {}", reps.len());
    // Walk every block and check each member behaves like the block's
    // representative for every alternative of every state.
    let mut boundaries = reps.clone();
    boundaries.push(crate::symbols::MAX_SYMBOL + 1);
    for w in boundaries.windows(2) {
        let (rep, next) = (w[0], w[1]);
        for sym in rep..next {
            for alts in &bfa.delta {
                for alt in alts {
                    assert_eq!(alt.ranges.contains(sym), alt.ranges.contains(rep));
                    for other in [0u16, 97, 109, 120, 256, 257] {
                        assert_eq!(
                            alt.guard.eval(other, sym),
                            alt.guard.eval(other, rep),
                            "cur position, prev {other}"
                        );
                        assert_eq!(
                            alt.guard.eval(sym, other),
                            alt.guard.eval(rep, other),
                            "prev position, cur {other}"
                        );
                    }
                }
            }
        }
    }
}
