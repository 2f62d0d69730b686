//! Recursive-descent parser for the byte-level regex subset.

use super::{AnchorKind, Ast, RegexError};
use crate::symbols::RangeSet;

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Widen every letter so both cases match, resolved at parse time.
    pub case_insensitive: bool,
}

pub fn parse_regex(pattern: &str, options: ParseOptions) -> Result<Ast, RegexError> {
    let mut p = Parser { input: pattern.as_bytes(), pos: 0, options };
    let ast = p.alternation()?;
    if p.pos != p.input.len() {
        // The only way alternation stops early is an unbalanced ')'.
        return Err(p.syntax("unmatched ')'"));
    }
    Ok(ast)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    options: ParseOptions,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> RegexError {
        RegexError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn unsupported(&self, construct: &str, offset: usize) -> RegexError {
        RegexError::Unsupported { construct: construct.to_string(), offset }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn alternation(&mut self) -> Result<Ast, RegexError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Ast::Alt(branches) })
    }

    fn concat(&mut self) -> Result<Ast, RegexError> {
        let mut parts = Vec::new();
        while let Some(b) = self.peek() {
            if b == b'|' || b == b')' {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(match parts.len() {
            0 => Ast::Empty,
            1 => parts.pop().unwrap(),
            _ => Ast::Concat(parts),
        })
    }

    fn postfix(&mut self) -> Result<Ast, RegexError> {
        let atom = self.atom()?;
        let quantified;
        let node = match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                quantified = true;
                Ast::Star(Box::new(atom))
            }
            Some(b'+') => {
                self.pos += 1;
                quantified = true;
                Ast::Plus(Box::new(atom))
            }
            Some(b'?') => {
                self.pos += 1;
                quantified = true;
                Ast::Opt(Box::new(atom))
            }
            Some(b'{') if self.quantifier_ahead() => {
                let (min, max) = self.counted_bounds()?;
                quantified = true;
                Ast::Repeat { node: Box::new(atom), min, max }
            }
            _ => {
                quantified = false;
                atom
            }
        };
        if !quantified {
            return Ok(node);
        }
        // A second quantifier directly behind the first is either a
        // lazy/possessive marker or a nested quantifier; reject all.
        match self.peek() {
            Some(b'?') => Err(self.unsupported("lazy quantifier", self.pos)),
            Some(b'+') => Err(self.unsupported("possessive quantifier", self.pos)),
            Some(b'*') => Err(self.syntax("nested quantifier requires a group")),
            Some(b'{') if self.quantifier_ahead() => {
                Err(self.syntax("nested quantifier requires a group"))
            }
            _ => Ok(node),
        }
    }

    /// True when the cursor sits on a `{` that forms a valid counted
    /// quantifier.  Otherwise the brace is an ordinary literal.
    fn quantifier_ahead(&self) -> bool {
        let rest = &self.input[self.pos..];
        if rest.first() != Some(&b'{') {
            return false;
        }
        let mut i = 1;
        let digits = |j: &mut usize| {
            let start = *j;
            while rest.get(*j).is_some_and(u8::is_ascii_digit) {
                *j += 1;
            }
            *j > start
        };
        if !digits(&mut i) {
            return false;
        }
        if rest.get(i) == Some(&b',') {
            i += 1;
            digits(&mut i);
        }
        rest.get(i) == Some(&b'}')
    }

    fn counted_bounds(&mut self) -> Result<(u32, Option<u32>), RegexError> {
        let start = self.pos;
        self.pos += 1; // '{'
        let min = self.number()?;
        let max = if self.peek() == Some(b',') {
            self.pos += 1;
            if self.peek() == Some(b'}') {
                None
            } else {
                Some(self.number()?)
            }
        } else {
            Some(min)
        };
        if self.bump() != Some(b'}') {
            self.pos = start;
            return Err(self.syntax("malformed counted repetition"));
        }
        if let Some(m) = max {
            if m < min {
                self.pos = start;
                return Err(self.syntax("counted repetition with max < min"));
            }
        }
        Ok((min, max))
    }

    fn number(&mut self) -> Result<u32, RegexError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        text.parse::<u32>().map_err(|_| RegexError::Syntax {
            offset: start,
            message: "repetition count out of range".to_string(),
        })
    }

    fn atom(&mut self) -> Result<Ast, RegexError> {
        let offset = self.pos;
        match self.bump().expect("atom called at end of input") {
            b'(' => self.group(offset),
            b'[' => self.class(offset),
            b'.' => Ok(self.class_node(dot_set())),
            b'^' => Ok(Ast::Anchor(AnchorKind::Start)),
            b'$' => Ok(Ast::Anchor(AnchorKind::End)),
            b'\\' => self.escape(offset),
            b'*' | b'+' | b'?' => {
                self.pos = offset;
                Err(self.syntax("quantifier with nothing to repeat"))
            }
            b'{' => {
                self.pos = offset;
                if self.quantifier_ahead() {
                    Err(self.syntax("quantifier with nothing to repeat"))
                } else {
                    // Not a counted repetition; plain literal brace.
                    self.pos = offset + 1;
                    Ok(self.literal_node(b'{'))
                }
            }
            other => Ok(self.literal_node(other)),
        }
    }

    fn group(&mut self, offset: usize) -> Result<Ast, RegexError> {
        if self.peek() == Some(b'?') {
            let construct = match self.input.get(self.pos + 1) {
                Some(b'=') => "lookahead (?=...)",
                Some(b'!') => "negative lookahead (?!...)",
                Some(b'<') => match self.input.get(self.pos + 2) {
                    Some(b'=') => "lookbehind (?<=...)",
                    Some(b'!') => "negative lookbehind (?<!...)",
                    _ => "named group (?<...>)",
                },
                Some(b':') => "non-capturing group (?:...)",
                _ => "(?...) group extension",
            };
            return Err(self.unsupported(construct, offset));
        }
        let inner = self.alternation()?;
        if self.bump() != Some(b')') {
            self.pos = offset;
            return Err(self.syntax("unmatched '('"));
        }
        Ok(inner)
    }

    fn escape(&mut self, offset: usize) -> Result<Ast, RegexError> {
        let Some(b) = self.bump() else {
            return Err(RegexError::Syntax {
                offset,
                message: "trailing backslash".to_string(),
            });
        };
        match b {
            b'n' => Ok(self.literal_node(b'\n')),
            b't' => Ok(self.literal_node(b'\t')),
            b'r' => Ok(self.literal_node(b'\r')),
            b'f' => Ok(self.literal_node(0x0c)),
            b'v' => Ok(self.literal_node(0x0b)),
            b'0' => Ok(self.literal_node(0)),
            b'x' => {
                let v = self.hex_byte(offset)?;
                Ok(self.literal_node(v))
            }
            b'd' => Ok(self.class_node(digit_set())),
            b'D' => Ok(self.class_node(digit_set().complement_bytes())),
            b'w' => Ok(self.class_node(word_set())),
            b'W' => Ok(self.class_node(word_set().complement_bytes())),
            b's' => Ok(self.class_node(space_set())),
            b'S' => Ok(self.class_node(space_set().complement_bytes())),
            b'b' => Ok(Ast::Anchor(AnchorKind::WordBoundary)),
            b'B' => Ok(Ast::Anchor(AnchorKind::NotWordBoundary)),
            b'1'..=b'9' => Err(self.unsupported("backreference", offset)),
            b'g' | b'k' => Err(self.unsupported("backreference", offset)),
            c if c.is_ascii_alphanumeric() => Err(RegexError::Syntax {
                offset,
                message: format!("unknown escape '\\{}'", c as char),
            }),
            c => Ok(self.literal_node(c)),
        }
    }

    fn hex_byte(&mut self, offset: usize) -> Result<u8, RegexError> {
        let hi = self.bump().and_then(hex_value);
        let lo = self.bump().and_then(hex_value);
        match (hi, lo) {
            (Some(h), Some(l)) => Ok(h << 4 | l),
            _ => Err(RegexError::Syntax {
                offset,
                message: "\\x requires exactly two hex digits".to_string(),
            }),
        }
    }

    fn class(&mut self, offset: usize) -> Result<Ast, RegexError> {
        let negated = if self.peek() == Some(b'^') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut set = RangeSet::empty();
        let mut first = true;
        loop {
            let member_offset = self.pos;
            let b = self.bump().ok_or_else(|| RegexError::Syntax {
                offset,
                message: "unterminated class".to_string(),
            })?;
            if b == b']' && !first {
                break;
            }
            first = false;
            let item = match b {
                b'\\' => self.class_escape(member_offset)?,
                _ => ClassItem::Byte(b),
            };
            match item {
                ClassItem::Set(s) => set = set.union(&s),
                ClassItem::Byte(lo) => {
                    // A '-' continues into a range unless it is the
                    // last member before ']'.
                    if self.peek() == Some(b'-') && self.input.get(self.pos + 1) != Some(&b']') {
                        self.pos += 1;
                        let hi_offset = self.pos;
                        let hb = self.bump().ok_or_else(|| RegexError::Syntax {
                            offset,
                            message: "unterminated class".to_string(),
                        })?;
                        let hi = match hb {
                            b'\\' => match self.class_escape(hi_offset)? {
                                ClassItem::Byte(v) => v,
                                ClassItem::Set(_) => {
                                    return Err(RegexError::Syntax {
                                        offset: hi_offset,
                                        message: "class shorthand cannot end a range"
                                            .to_string(),
                                    })
                                }
                            },
                            v => v,
                        };
                        if hi < lo {
                            return Err(RegexError::Syntax {
                                offset: member_offset,
                                message: "class range out of order".to_string(),
                            });
                        }
                        set = set.union(&RangeSet::range(lo as u16, hi as u16));
                    } else {
                        set = set.union(&RangeSet::singleton(lo as u16));
                    }
                }
            }
        }
        // Case widening happens before negation so that e.g. a caseless
        // [^a] excludes both cases of the letter.
        if self.options.case_insensitive {
            set = widen_case(&set);
        }
        let resolved = if negated { set.complement_bytes() } else { set };
        if resolved.is_empty() {
            return Err(RegexError::Syntax {
                offset,
                message: "class matches no byte".to_string(),
            });
        }
        Ok(Ast::Class(resolved))
    }

    fn class_escape(&mut self, offset: usize) -> Result<ClassItem, RegexError> {
        let Some(b) = self.bump() else {
            return Err(RegexError::Syntax {
                offset,
                message: "trailing backslash".to_string(),
            });
        };
        Ok(match b {
            b'n' => ClassItem::Byte(b'\n'),
            b't' => ClassItem::Byte(b'\t'),
            b'r' => ClassItem::Byte(b'\r'),
            b'f' => ClassItem::Byte(0x0c),
            b'v' => ClassItem::Byte(0x0b),
            b'0' => ClassItem::Byte(0),
            b'b' => ClassItem::Byte(0x08), // backspace inside a class
            b'x' => ClassItem::Byte(self.hex_byte(offset)?),
            b'd' => ClassItem::Set(digit_set()),
            b'D' => ClassItem::Set(digit_set().complement_bytes()),
            b'w' => ClassItem::Set(word_set()),
            b'W' => ClassItem::Set(word_set().complement_bytes()),
            b's' => ClassItem::Set(space_set()),
            b'S' => ClassItem::Set(space_set().complement_bytes()),
            c if c.is_ascii_alphanumeric() => {
                return Err(RegexError::Syntax {
                    offset,
                    message: format!("unknown escape '\\{}' in class", c as char),
                })
            }
            c => ClassItem::Byte(c),
        })
    }

    fn literal_node(&self, byte: u8) -> Ast {
        self.class_node(RangeSet::singleton(byte as u16))
    }

    fn class_node(&self, set: RangeSet) -> Ast {
        Ast::Class(if self.options.case_insensitive { widen_case(&set) } else { set })
    }
}

enum ClassItem {
    Byte(u8),
    Set(RangeSet),
}

fn hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

fn digit_set() -> RangeSet {
    RangeSet::range(b'0' as u16, b'9' as u16)
}

fn word_set() -> RangeSet {
    RangeSet::from_ranges(vec![
        (b'0' as u16, b'9' as u16),
        (b'A' as u16, b'Z' as u16),
        (b'_' as u16, b'_' as u16),
        (b'a' as u16, b'z' as u16),
    ])
}

fn space_set() -> RangeSet {
    // space, \t, \n, \v, \f, \r
    RangeSet::from_ranges(vec![(0x09, 0x0d), (0x20, 0x20)])
}

fn dot_set() -> RangeSet {
    RangeSet::singleton(b'\n' as u16).complement_bytes()
}

/// Adds the case-swapped image of every letter in the set.
fn widen_case(set: &RangeSet) -> RangeSet {
    let mut extra = Vec::new();
    for &(lo, hi) in set.ranges() {
        let overlap = |a: u16, b: u16, delta: i32| {
            let olo = lo.max(a);
            let ohi = hi.min(b);
            if olo <= ohi {
                Some(((olo as i32 + delta) as u16, (ohi as i32 + delta) as u16))
            } else {
                None
            }
        };
        extra.extend(overlap(b'A' as u16, b'Z' as u16, 32));
        extra.extend(overlap(b'a' as u16, b'z' as u16, -32));
    }
    if extra.is_empty() {
        set.clone()
    } else {
        let mut all: Vec<(u16, u16)> = set.ranges().to_vec();
        all.extend(extra);
        RangeSet::from_ranges(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(p: &str) -> Ast {
        parse_regex(p, ParseOptions::default()).unwrap()
    }

    fn parse_err(p: &str) -> RegexError {
        parse_regex(p, ParseOptions::default()).unwrap_err()
    }

    #[test]
    fn literals_and_concat() {
        assert_eq!(parse(""), Ast::Empty);
        assert_eq!(parse("a"), Ast::Class(RangeSet::singleton(97)));
        assert_eq!(
            parse("ab"),
            Ast::Concat(vec![
                Ast::Class(RangeSet::singleton(97)),
                Ast::Class(RangeSet::singleton(98)),
            ])
        );
    }

    #[test]
    fn alternation_and_empty_branches() {
        assert_eq!(
            parse("a|"),
            Ast::Alt(vec![Ast::Class(RangeSet::singleton(97)), Ast::Empty])
        );
        assert!(matches!(parse("a|b|c"), Ast::Alt(kids) if kids.len() == 3));
    }

    #[test]
    fn quantifiers() {
        assert!(matches!(parse("a*"), Ast::Star(_)));
        assert!(matches!(parse("a+"), Ast::Plus(_)));
        assert!(matches!(parse("a?"), Ast::Opt(_)));
        assert_eq!(
            parse("a{2,5}"),
            Ast::Repeat {
                node: Box::new(Ast::Class(RangeSet::singleton(97))),
                min: 2,
                max: Some(5),
            }
        );
        assert!(matches!(parse("a{3}"), Ast::Repeat { min: 3, max: Some(3), .. }));
        assert!(matches!(parse("a{3,}"), Ast::Repeat { min: 3, max: None, .. }));
    }

    #[test]
    fn stray_brace_is_literal() {
        assert_eq!(parse("a{"), parse("a\\{"));
        assert_eq!(parse("{x"), parse("\\{x"));
        assert_eq!(parse("a{1x}"), parse("a\\{1x\\}"));
    }

    #[test]
    fn classes() {
        assert_eq!(parse("[a-c]"), Ast::Class(RangeSet::range(97, 99)));
        assert_eq!(parse("[]a]"), Ast::Class(RangeSet::from_ranges(vec![(93, 93), (97, 97)])));
        assert_eq!(parse("[a-]"), Ast::Class(RangeSet::from_ranges(vec![(45, 45), (97, 97)])));
        assert_eq!(parse("[^\\x00-\\x60\\x7b-\\xff]"), parse("[a-z]"));
        assert_eq!(parse("[\\d]"), parse("\\d"));
        assert!(matches!(parse_err("[z-a]"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("[^\\x00-\\xff]"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("[abc"), RegexError::Syntax { .. }));
    }

    #[test]
    fn escapes() {
        assert_eq!(parse("\\x41"), Ast::Class(RangeSet::singleton(65)));
        assert_eq!(parse("\\n"), Ast::Class(RangeSet::singleton(10)));
        assert_eq!(parse("\\."), Ast::Class(RangeSet::singleton(46)));
        assert!(matches!(parse_err("\\x4"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("\\q"), RegexError::Syntax { .. }));
    }

    #[test]
    fn dot_excludes_newline() {
        let Ast::Class(set) = parse(".") else { panic!() };
        assert!(!set.contains(10));
        assert_eq!(set.count(), 255);
    }

    #[test]
    fn anchors() {
        assert_eq!(parse("^"), Ast::Anchor(AnchorKind::Start));
        assert_eq!(parse("$"), Ast::Anchor(AnchorKind::End));
        assert_eq!(parse("\\b"), Ast::Anchor(AnchorKind::WordBoundary));
        assert_eq!(parse("\\B"), Ast::Anchor(AnchorKind::NotWordBoundary));
    }

    #[test]
    fn unsupported_constructs_are_named() {
        let e = parse_err("(a)\\1");
        assert!(matches!(&e, RegexError::Unsupported { construct, .. }
            if construct == "backreference"), "{e:?}");
        let e = parse_err("(?=a)b");
        assert!(matches!(&e, RegexError::Unsupported { construct, .. }
            if construct.contains("lookahead")));
        let e = parse_err("(?<=a)b");
        assert!(matches!(&e, RegexError::Unsupported { construct, .. }
            if construct.contains("lookbehind")));
        let e = parse_err("a*?");
        assert!(matches!(&e, RegexError::Unsupported { construct, .. }
            if construct == "lazy quantifier"));
        let e = parse_err("(?:ab)");
        assert!(matches!(&e, RegexError::Unsupported { .. }));
    }

    #[test]
    fn malformed_patterns() {
        assert!(matches!(parse_err("(a"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("a)"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("*a"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("a**"), RegexError::Syntax { .. }));
        assert!(matches!(parse_err("a{5,2}"), RegexError::Syntax { .. }));
    }

    #[test]
    fn case_insensitive_widening() {
        let opts = ParseOptions { case_insensitive: true };
        let a = parse_regex("a", opts).unwrap();
        let upper = parse_regex("A", opts).unwrap();
        assert_eq!(a, upper);
        assert_eq!(a, Ast::Class(RangeSet::from_ranges(vec![(65, 65), (97, 97)])));
        let r = parse_regex("[x-z0]", opts).unwrap();
        assert_eq!(
            r,
            Ast::Class(RangeSet::from_ranges(vec![(48, 48), (88, 90), (120, 122)]))
        );
        // Non-letters are untouched.
        assert_eq!(parse_regex("0", opts).unwrap(), parse("0"));
    }
}
