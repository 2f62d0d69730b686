//! Rewrites the parsed AST into the core fragment: classes, concat,
//! alternation, star, and anchors.  `+`, `?`, and counted repetition
//! are expanded structurally.

use super::{Ast, RegexError};

/// Ceiling on the node count of the expanded AST.  Counted repetitions
/// multiply subtree sizes, so an unchecked expansion of something like
/// `(a{100}){100}` would allocate without bound.
pub const DEFAULT_REPEAT_LIMIT: usize = 4096;

pub fn desugar(ast: &Ast) -> Result<Ast, RegexError> {
    let mut budget = Budget { remaining: DEFAULT_REPEAT_LIMIT };
    let out = rewrite(ast, &mut budget)?;
    debug_assert!(out.is_core());
    Ok(out)
}

struct Budget {
    remaining: usize,
}

impl Budget {
    fn spend(&mut self, nodes: usize) -> Result<(), RegexError> {
        if nodes > self.remaining {
            Err(RegexError::RepeatLimit { limit: DEFAULT_REPEAT_LIMIT })
        } else {
            self.remaining -= nodes;
            Ok(())
        }
    }
}

fn rewrite(ast: &Ast, budget: &mut Budget) -> Result<Ast, RegexError> {
    budget.spend(1)?;
    Ok(match ast {
        Ast::Empty | Ast::Class(_) | Ast::Anchor(_) => ast.clone(),
        Ast::Concat(parts) => {
            let parts = parts.iter().map(|p| rewrite(p, budget)).collect::<Result<_, _>>()?;
            Ast::Concat(parts)
        }
        Ast::Alt(branches) => {
            let branches =
                branches.iter().map(|b| rewrite(b, budget)).collect::<Result<_, _>>()?;
            Ast::Alt(branches)
        }
        Ast::Star(inner) => Ast::Star(Box::new(rewrite(inner, budget)?)),
        Ast::Plus(inner) => {
            let core = rewrite(inner, budget)?;
            budget.spend(core.size() + 2)?;
            Ast::Concat(vec![core.clone(), Ast::Star(Box::new(core))])
        }
        Ast::Opt(inner) => {
            budget.spend(2)?;
            Ast::Alt(vec![rewrite(inner, budget)?, Ast::Empty])
        }
        Ast::Repeat { node, min, max } => {
            let core = rewrite(node, budget)?;
            expand_repeat(&core, *min, *max, budget)?
        }
    })
}

fn expand_repeat(
    core: &Ast,
    min: u32,
    max: Option<u32>,
    budget: &mut Budget,
) -> Result<Ast, RegexError> {
    let unit = core.size();
    let mut parts = Vec::new();
    for _ in 0..min {
        budget.spend(unit)?;
        parts.push(core.clone());
    }
    match max {
        // e{n,} = e^n e*
        None => {
            budget.spend(unit + 1)?;
            parts.push(Ast::Star(Box::new(core.clone())));
        }
        // e{n,m} = e^n (e (e (...)?)?)? with m-n optional layers,
        // nested so that shorter prefixes stay well-formed.
        Some(m) => {
            let extra = m - min;
            let mut tail: Option<Ast> = None;
            for _ in 0..extra {
                budget.spend(unit + 3)?;
                let step = match tail.take() {
                    None => core.clone(),
                    Some(t) => Ast::Concat(vec![core.clone(), t]),
                };
                tail = Some(Ast::Alt(vec![step, Ast::Empty]));
            }
            if let Some(t) = tail {
                parts.push(t);
            }
        }
    }
    Ok(match parts.len() {
        0 => Ast::Empty,
        1 => parts.pop().unwrap(),
        _ => Ast::Concat(parts),
    })
}
