//! Regular-expression front end: a PCRE-style parser for a byte-level
//! subset, desugaring of bounded repetition, and an AST-level reference
//! matcher used to cross-check everything downstream.
//!
//! Supported syntax: literals, `\xNN`/`\n`/`\t` style escapes, the
//! perl classes `\d \w \s` and their negations, `.`, bracket classes
//! with ranges and negation, alternation, `* + ?`, counted repetition
//! `{n}`/`{n,}`/`{n,m}`, groups, and the anchors `^ $ \b \B`.
//! Backreferences, lookaround, and lazy quantifiers are rejected with
//! an error naming the construct.
//!
//! Membership is whole-string: a byte string belongs to the language
//! when the expression can consume it entirely.  Anchors are zero-width
//! position predicates, so `^`/`$` are redundant at the outermost level
//! but meaningful inside alternations and repetitions.

mod desugar;
mod matcher;
mod parse;

pub use desugar::{desugar, DEFAULT_REPEAT_LIMIT};
pub use matcher::regex_match;
pub use parse::{parse_regex, ParseOptions};

use crate::symbols::RangeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorKind {
    /// `^` — start of the string.
    Start,
    /// `$` — end of the string.
    End,
    /// `\b` — word/non-word transition.
    WordBoundary,
    /// `\B` — no word/non-word transition.
    NotWordBoundary,
}

/// Regular-expression syntax tree over bytes.
///
/// [`parse_regex`] may produce any variant; [`desugar`] reduces the
/// tree to the core subset (no `Plus`, `Opt`, or `Repeat`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// Matches the empty string.
    Empty,
    /// Matches one byte out of the set.  Single literals are stored as
    /// one-element sets; class negation is already resolved.
    Class(RangeSet),
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(Box<Ast>),
    Plus(Box<Ast>),
    Opt(Box<Ast>),
    Repeat { node: Box<Ast>, min: u32, max: Option<u32> },
    Anchor(AnchorKind),
}

impl Ast {
    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Ast::Empty | Ast::Class(_) | Ast::Anchor(_) => 1,
            Ast::Concat(kids) | Ast::Alt(kids) => {
                1 + kids.iter().map(Ast::size).sum::<usize>()
            }
            Ast::Star(k) | Ast::Plus(k) | Ast::Opt(k) => 1 + k.size(),
            Ast::Repeat { node, .. } => 1 + node.size(),
        }
    }

    /// True when only core constructs appear (desugared form).
    pub fn is_core(&self) -> bool {
        match self {
            Ast::Empty | Ast::Class(_) | Ast::Anchor(_) => true,
            Ast::Concat(kids) | Ast::Alt(kids) => kids.iter().all(Ast::is_core),
            Ast::Star(k) => k.is_core(),
            Ast::Plus(_) | Ast::Opt(_) | Ast::Repeat { .. } => false,
        }
    }

    /// Length of the shortest string the expression can match, if any.
    pub fn min_match_len(&self) -> Option<usize> {
        match self {
            Ast::Empty | Ast::Anchor(_) => Some(0),
            Ast::Class(set) => {
                if set.is_empty() {
                    None
                } else {
                    Some(1)
                }
            }
            Ast::Concat(kids) => {
                let mut total = 0;
                for k in kids {
                    total += k.min_match_len()?;
                }
                Some(total)
            }
            Ast::Alt(kids) => kids.iter().filter_map(Ast::min_match_len).min(),
            Ast::Star(_) | Ast::Opt(_) => Some(0),
            Ast::Plus(k) => k.min_match_len(),
            Ast::Repeat { node, min, .. } => {
                if *min == 0 {
                    Some(0)
                } else {
                    node.min_match_len().map(|l| l * *min as usize)
                }
            }
        }
    }

    /// The distinct byte values mentioned by the expression's classes.
    pub fn collect_bytes(&self, out: &mut std::collections::BTreeSet<u8>) {
        match self {
            Ast::Empty | Ast::Anchor(_) => {}
            Ast::Class(set) => {
                for s in set.iter() {
                    out.insert(s as u8);
                }
            }
            Ast::Concat(kids) | Ast::Alt(kids) => {
                for k in kids {
                    k.collect_bytes(out);
                }
            }
            Ast::Star(k) | Ast::Plus(k) | Ast::Opt(k) => k.collect_bytes(out),
            Ast::Repeat { node, .. } => node.collect_bytes(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegexError {
    #[error("regex syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported regex construct at byte {offset}: {construct}")]
    Unsupported { construct: String, offset: usize },
    #[error("counted repetition expands past the limit of {limit} nodes")]
    RepeatLimit { limit: usize },
}
