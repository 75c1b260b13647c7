//! Propositional formulas: syntax tree, parser, printer and complexity.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// A propositional variable. Names match `[a-z][a-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Builds a variable, rejecting names outside the variable alphabet.
    pub fn new(name: &str) -> Result<Var, ParseError> {
        let mut chars = name.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_lowercase() => {}
            _ => return Err(ParseError::new(0, &["variable"], name.chars().next())),
        }
        for (i, c) in chars {
            if !is_var_continue(c) {
                return Err(ParseError::new(i, &["variable"], Some(c)));
            }
        }
        Ok(Var(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A formula over `~`, `&`, `|` and `->`.
///
/// Subterms are reference counted so cloning a formula, or a sequent full of them, is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Var),
    Neg(Arc<Formula>),
    Conj(Arc<Formula>, Arc<Formula>),
    Disj(Arc<Formula>, Arc<Formula>),
    Impl(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Var::new(name).expect("invalid variable name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Arc::new(a))
    }

    pub fn conj(a: Formula, b: Formula) -> Formula {
        Formula::Conj(Arc::new(a), Arc::new(b))
    }

    pub fn disj(a: Formula, b: Formula) -> Formula {
        Formula::Disj(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Arc::new(a), Arc::new(b))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn as_atom(&self) -> Option<&Var> {
        match self {
            Formula::Atom(v) => Some(v),
            _ => None,
        }
    }

    /// Number of connectives, where each binary connective counts twice.
    ///
    /// `comp(p) = 0`, `comp(~A) = comp(A) + 1`, `comp(A * B) = comp(A) + comp(B) + 2`.
    pub fn comp(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Neg(a) => a.comp() + 1,
            Formula::Conj(a, b) | Formula::Disj(a, b) | Formula::Impl(a, b) => {
                a.comp() + b.comp() + 2
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Neg(a) => a.size() + 1,
            Formula::Conj(a, b) | Formula::Disj(a, b) | Formula::Impl(a, b) => {
                a.size() + b.size() + 1
            }
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Formula::Atom(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Formula::Neg(a) => a.vars_in_order(out),
            Formula::Conj(a, b) | Formula::Disj(a, b) | Formula::Impl(a, b) => {
                a.vars_in_order(out);
                b.vars_in_order(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = Vec::new();
        self.vars_in_order(&mut out);
        out.into_iter().collect()
    }

    /// Evaluates under a valuation given as a predicate on variables.
    pub fn eval(&self, val: &dyn Fn(&Var) -> bool) -> bool {
        match self {
            Formula::Atom(v) => val(v),
            Formula::Neg(a) => !a.eval(val),
            Formula::Conj(a, b) => a.eval(val) && b.eval(val),
            Formula::Disj(a, b) => a.eval(val) || b.eval(val),
            Formula::Impl(a, b) => !a.eval(val) || b.eval(val),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Impl(..) => 1,
            Formula::Disj(..) => 2,
            Formula::Conj(..) => 3,
            Formula::Neg(_) => 4,
            Formula::Atom(_) => 5,
        }
    }

    /// Writes the formula with the given connective spellings, parenthesising
    /// only where precedence or associativity demands it.
    pub(crate) fn write_with(&self, out: &mut String, syms: &Symbols, min_prec: u8) {
        let paren = self.precedence() < min_prec;
        if paren {
            out.push_str(syms.lparen);
        }
        match self {
            Formula::Atom(v) => out.push_str(v.name()),
            Formula::Neg(a) => {
                out.push_str(syms.neg);
                a.write_with(out, syms, 4);
            }
            Formula::Conj(a, b) => {
                a.write_with(out, syms, 3);
                out.push_str(syms.conj);
                b.write_with(out, syms, 4);
            }
            Formula::Disj(a, b) => {
                a.write_with(out, syms, 2);
                out.push_str(syms.disj);
                b.write_with(out, syms, 3);
            }
            Formula::Impl(a, b) => {
                a.write_with(out, syms, 2);
                out.push_str(syms.imp);
                b.write_with(out, syms, 1);
            }
        }
        if paren {
            out.push_str(syms.rparen);
        }
    }
}

pub(crate) struct Symbols {
    pub neg: &'static str,
    pub conj: &'static str,
    pub disj: &'static str,
    pub imp: &'static str,
    pub lparen: &'static str,
    pub rparen: &'static str,
}

pub(crate) const ASCII: Symbols = Symbols {
    neg: "~",
    conj: " & ",
    disj: " | ",
    imp: " -> ",
    lparen: "(",
    rparen: ")",
};

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_with(&mut s, &ASCII, 0);
        f.write_str(&s)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse_formula(s)
    }
}

/// A syntax error: the byte offset where parsing stopped and what would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {}, found {}", .expected.join(" or "), found_str(.found))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: Option<char>,
}

fn found_str(c: &Option<char>) -> String {
    match c {
        Some(c) => format!("{c:?}"),
        None => "end of input".to_string(),
    }
}

impl ParseError {
    fn new(offset: usize, expected: &[&'static str], found: Option<char>) -> ParseError {
        ParseError {
            offset,
            expected: expected.to_vec(),
            found,
        }
    }
}

fn is_var_continue(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Var(String),
    Neg,
    Conj,
    Disj,
    Impl,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

/// Tokenizer shared by the formula and sequent parsers.
pub(crate) struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    peeked: Option<(usize, Option<Tok>)>,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src,
            pos: 0,
            peeked: None,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn lex(&mut self) -> Result<(usize, Option<Tok>), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((start, None));
        };
        let (tok, len) = match c {
            '~' | '¬' => (Tok::Neg, c.len_utf8()),
            '&' | '∧' => (Tok::Conj, c.len_utf8()),
            '|' | '∨' => (Tok::Disj, c.len_utf8()),
            '→' => (Tok::Impl, c.len_utf8()),
            '⇒' => (Tok::Turnstile, c.len_utf8()),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '-' if rest.starts_with("->") => (Tok::Impl, 2),
            '=' if rest.starts_with("=>") => (Tok::Turnstile, 2),
            c if c.is_ascii_lowercase() => {
                let len = rest
                    .char_indices()
                    .find(|&(_, c)| !is_var_continue(c))
                    .map_or(rest.len(), |(i, _)| i);
                (Tok::Var(rest[..len].to_string()), len)
            }
            _ => return Err(ParseError::new(start, &[], Some(c))),
        };
        self.pos = start + len;
        Ok((start, Some(tok)))
    }

    pub(crate) fn peek(&mut self) -> Result<(usize, Option<Tok>), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.clone().expect("peeked"))
    }

    pub(crate) fn next(&mut self) -> Result<(usize, Option<Tok>), ParseError> {
        let t = self.peek()?;
        self.peeked = None;
        Ok(t)
    }

    pub(crate) fn char_at(&self, offset: usize) -> Option<char> {
        self.src[offset..].chars().next()
    }

    pub(crate) fn error(&self, offset: usize, expected: &[&'static str]) -> ParseError {
        ParseError::new(offset, expected, self.char_at(offset))
    }
}

const ATOM_START: &[&str] = &["variable", "\"~\"", "\"(\""];

pub(crate) fn parse_impl(lx: &mut Lexer<'_>) -> Result<Formula, ParseError> {
    let lhs = parse_disj(lx)?;
    if let (_, Some(Tok::Impl)) = lx.peek()? {
        lx.next()?;
        let rhs = parse_impl(lx)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_disj(lx: &mut Lexer<'_>) -> Result<Formula, ParseError> {
    let mut acc = parse_conj(lx)?;
    while let (_, Some(Tok::Disj)) = lx.peek()? {
        lx.next()?;
        acc = Formula::disj(acc, parse_conj(lx)?);
    }
    Ok(acc)
}

fn parse_conj(lx: &mut Lexer<'_>) -> Result<Formula, ParseError> {
    let mut acc = parse_neg(lx)?;
    while let (_, Some(Tok::Conj)) = lx.peek()? {
        lx.next()?;
        acc = Formula::conj(acc, parse_neg(lx)?);
    }
    Ok(acc)
}

fn parse_neg(lx: &mut Lexer<'_>) -> Result<Formula, ParseError> {
    match lx.next()? {
        (_, Some(Tok::Neg)) => Ok(Formula::neg(parse_neg(lx)?)),
        (_, Some(Tok::Var(name))) => Ok(Formula::Atom(Var(Arc::from(name.as_str())))),
        (_, Some(Tok::LParen)) => {
            let inner = parse_impl(lx)?;
            match lx.next()? {
                (_, Some(Tok::RParen)) => Ok(inner),
                (off, _) => Err(lx.error(off, &["\")\"", "operator"])),
            }
        }
        (off, _) => Err(lx.error(off, ATOM_START)),
    }
}

/// Parses a formula. Accepts the ASCII connectives and their Unicode forms `¬ ∧ ∨ →`.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut lx = Lexer::new(src);
    let f = parse_impl(&mut lx)?;
    match lx.next()? {
        (_, None) => Ok(f),
        (off, _) => Err(lx.error(off, &["operator", "end of input"])),
    }
}
