//! The textual problem format: a small s-expression surface.
//!
//! ```text
//! ; comments run to end of line
//! (declare-var x)
//! (declare-var y)
//! (assert (and (in x "a(b|c)*d") (not (in y "^ab$"))))
//! (check-sat)
//! ```
//!
//! Multiple `assert`s conjoin; `check-sat` is optional (solving always
//! checks).  Connectives are `and`, `or`, `not`, and the atom
//! `(in VAR "REGEX")`.  In regex literals, `\"` and `\\` unquote to
//! `"` and `\`, `\n`/`\t` to the control characters, and any other
//! backslash pair passes through unchanged — so regex escapes like
//! `\d` or `\x41` need no doubling when written by hand.  The writer
//! always emits the fully escaped form.

use std::fmt::Write as _;

use thiserror::Error;

use crate::regex::{parse_regex, ParseOptions, RegexError};
use crate::smt::{Formula, Problem};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: in regex {pattern:?}: {source}")]
    Regex {
        line: usize,
        pattern: String,
        source: RegexError,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
    Str(String),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Open => "'('".to_string(),
            Token::Close => "')'".to_string(),
            Token::Atom(a) => format!("'{a}'"),
            Token::Str(_) => "a string".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    peeked: Option<(Token, usize)>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, peeked: None }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
        }
        Some(b)
    }

    fn next(&mut self) -> Result<Option<(Token, usize)>, FormatError> {
        if let Some(t) = self.peeked.take() {
            return Ok(Some(t));
        }
        loop {
            match self.src.get(self.pos).copied() {
                None => return Ok(None),
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b';') => {
                    while self.src.get(self.pos).is_some_and(|&b| b != b'\n') {
                        self.pos += 1;
                    }
                }
                Some(b'(') => {
                    let line = self.line;
                    self.bump();
                    return Ok(Some((Token::Open, line)));
                }
                Some(b')') => {
                    let line = self.line;
                    self.bump();
                    return Ok(Some((Token::Close, line)));
                }
                Some(b'"') => {
                    let line = self.line;
                    self.bump();
                    return Ok(Some((Token::Str(self.string_body(line)?), line)));
                }
                Some(_) => {
                    let line = self.line;
                    let start = self.pos;
                    while self.src.get(self.pos).is_some_and(|&b| {
                        !b.is_ascii_whitespace() && !b"()\";".contains(&b)
                    }) {
                        self.pos += 1;
                    }
                    let atom = std::str::from_utf8(&self.src[start..self.pos])
                        .expect("input was a str and delimiters are ascii")
                        .to_string();
                    return Ok(Some((Token::Atom(atom), line)));
                }
            }
        }
    }

    fn string_body(&mut self, start_line: usize) -> Result<String, FormatError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(start_line, "unterminated string")),
                Some(b'"') => return Ok(out),
                Some(b'\\') => match self.bump() {
                    None => return Err(syntax(start_line, "unterminated string")),
                    Some(b'"') => out.push('"'),
                    Some(b'\\') => out.push('\\'),
                    Some(b'n') => out.push('\n'),
                    Some(b't') => out.push('\t'),
                    Some(other) => {
                        // Leave the pair for the regex parser.
                        out.push('\\');
                        out.push(other as char);
                    }
                },
                Some(b) if b.is_ascii() => out.push(b as char),
                Some(b) => {
                    // Multi-byte UTF-8: keep the raw bytes intact.
                    let mut buf = vec![b];
                    while self.src.get(self.pos).is_some_and(|&n| n & 0xc0 == 0x80) {
                        buf.push(self.bump().unwrap());
                    }
                    out.push_str(
                        std::str::from_utf8(&buf)
                            .expect("input was a str, so sequences are valid"),
                    );
                }
            }
        }
    }

    fn require(&mut self, what: &str) -> Result<(Token, usize), FormatError> {
        let line = self.line;
        self.next()?
            .ok_or_else(|| syntax(line, format!("expected {what}, found end of input")))
    }

    fn atom(&mut self, what: &str) -> Result<(String, usize), FormatError> {
        match self.require(what)? {
            (Token::Atom(a), line) => Ok((a, line)),
            (other, line) => {
                Err(syntax(line, format!("expected {what}, found {}", other.describe())))
            }
        }
    }

    fn close(&mut self) -> Result<(), FormatError> {
        match self.require("')'")? {
            (Token::Close, _) => Ok(()),
            (other, line) => {
                Err(syntax(line, format!("expected ')', found {}", other.describe())))
            }
        }
    }

    fn at_close(&mut self) -> Result<bool, FormatError> {
        if self.peeked.is_none() {
            self.peeked = self.next()?;
        }
        Ok(matches!(self.peeked, Some((Token::Close, _))))
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
}

pub fn parse_problem(src: &str) -> Result<Problem, FormatError> {
    let mut lx = Lexer::new(src);
    let mut var_names: Vec<String> = Vec::new();
    let mut asserts: Vec<Formula> = Vec::new();
    while let Some((tok, line)) = lx.next()? {
        if tok != Token::Open {
            return Err(syntax(line, format!("expected '(', found {}", tok.describe())));
        }
        let (head, hline) = lx.atom("a form name")?;
        match head.as_str() {
            "declare-var" => {
                let (name, nline) = lx.atom("a variable name")?;
                if !valid_name(&name) {
                    return Err(syntax(nline, format!("invalid variable name '{name}'")));
                }
                if var_names.contains(&name) {
                    return Err(syntax(nline, format!("variable '{name}' declared twice")));
                }
                var_names.push(name);
                lx.close()?;
            }
            "assert" => {
                asserts.push(parse_formula(&mut lx, &var_names)?);
                lx.close()?;
            }
            "check-sat" => lx.close()?,
            other => {
                return Err(syntax(hline, format!("unknown form '{other}'")));
            }
        }
    }
    let formula = if asserts.len() == 1 {
        asserts.pop().expect("len checked")
    } else {
        Formula::And(asserts)
    };
    Ok(Problem { var_names, formula })
}

fn parse_formula(lx: &mut Lexer, vars: &[String]) -> Result<Formula, FormatError> {
    match lx.require("a formula")? {
        (Token::Open, _) => {}
        (other, line) => {
            return Err(syntax(line, format!("expected a formula, found {}", other.describe())));
        }
    }
    let (op, oline) = lx.atom("a connective or 'in'")?;
    let f = match op.as_str() {
        "and" | "or" => {
            let mut kids = Vec::new();
            while !lx.at_close()? {
                kids.push(parse_formula(lx, vars)?);
            }
            if op == "and" {
                Formula::And(kids)
            } else {
                Formula::Or(kids)
            }
        }
        "not" => Formula::Not(Box::new(parse_formula(lx, vars)?)),
        "in" => {
            let (name, nline) = lx.atom("a variable name")?;
            let var = vars
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| syntax(nline, format!("undeclared variable '{name}'")))?;
            let (pattern, pline) = match lx.require("a regex string")? {
                (Token::Str(s), l) => (s, l),
                (other, l) => {
                    return Err(syntax(
                        l,
                        format!("expected a regex string, found {}", other.describe()),
                    ));
                }
            };
            let regex = parse_regex(&pattern, ParseOptions::default()).map_err(|source| {
                FormatError::Regex { line: pline, pattern: pattern.clone(), source }
            })?;
            Formula::Member { var, regex, pattern }
        }
        other => {
            return Err(syntax(oline, format!("unknown operator '{other}'")));
        }
    };
    lx.close()?;
    Ok(f)
}

pub fn write_problem(problem: &Problem) -> String {
    let mut out = String::new();
    for name in &problem.var_names {
        writeln!(out, "(declare-var {name})").expect("string writes are infallible");
    }
    let mut body = String::new();
    write_formula(&problem.formula, &problem.var_names, &mut body);
    writeln!(out, "(assert {body})").expect("string writes are infallible");
    out.push_str("(check-sat)\n");
    out
}

fn write_formula(f: &Formula, names: &[String], out: &mut String) {
    match f {
        Formula::And(kids) | Formula::Or(kids) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::And(_)) { "and" } else { "or" });
            for k in kids {
                out.push(' ');
                write_formula(k, names, out);
            }
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str("(not ");
            write_formula(inner, names, out);
            out.push(')');
        }
        Formula::Member { var, pattern, .. } => {
            out.push_str("(in ");
            out.push_str(&names[*var]);
            out.push_str(" \"");
            for c in pattern.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    other => out.push(other),
                }
            }
            out.push_str("\")");
        }
    }
}
