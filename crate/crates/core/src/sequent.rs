//! Sequents `A1, ..., An => B1, ..., Bm` and the multiset view of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formula::{parse_impl, Formula, Lexer, ParseError, Tok, Var};

/// Which side of the turnstile a formula occurrence lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ante,
    Succ,
}

/// An ordered sequent. Order matters to the rules; the multiset view is available separately.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent { ante, succ }
    }

    pub fn side(&self, side: Side) -> &Vec<Formula> {
        match side {
            Side::Ante => &self.ante,
            Side::Succ => &self.succ,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<Formula> {
        match side {
            Side::Ante => &mut self.ante,
            Side::Succ => &mut self.succ,
        }
    }

    /// Sum of formula complexities over both sides.
    pub fn seqcomp(&self) -> usize {
        self.ante.iter().chain(&self.succ).map(Formula::comp).sum()
    }

    pub fn len(&self) -> usize {
        self.ante.len() + self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ante.is_empty() && self.succ.is_empty()
    }

    pub fn is_atomic(&self) -> bool {
        self.ante.iter().chain(&self.succ).all(Formula::is_atomic)
    }

    /// Variables in order of first occurrence, antecedent first.
    pub fn vars_in_order(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for f in self.ante.iter().chain(&self.succ) {
            f.vars_in_order(&mut out);
        }
        out
    }

    /// Classical validity under the valuation: some antecedent false or some succedent true.
    pub fn eval(&self, val: &dyn Fn(&Var) -> bool) -> bool {
        self.ante.iter().any(|f| !f.eval(val)) || self.succ.iter().any(|f| f.eval(val))
    }

    pub fn multiset(&self) -> (FormulaMultiset, FormulaMultiset) {
        (
            FormulaMultiset::from_iter(self.ante.iter().cloned()),
            FormulaMultiset::from_iter(self.succ.iter().cloned()),
        )
    }

    /// Equal up to the order of formulas on each side.
    pub fn same_multisets(&self, other: &Sequent) -> bool {
        self.multiset() == other.multiset()
    }

    /// `A, self`
    pub fn with_front(&self, f: Formula) -> Sequent {
        let mut ante = Vec::with_capacity(self.ante.len() + 1);
        ante.push(f);
        ante.extend(self.ante.iter().cloned());
        Sequent::new(ante, self.succ.clone())
    }

    /// `self, A` on the right.
    pub fn with_back(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        s.succ.push(f);
        s
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Formula]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !self.ante.is_empty() {
            write!(f, "{} ", join(&self.ante))?;
        }
        f.write_str("=>")?;
        if !self.succ.is_empty() {
            write!(f, " {}", join(&self.succ))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Sequent, ParseError> {
        parse_sequent(s)
    }
}

fn parse_side(lx: &mut Lexer<'_>, stop: Option<Tok>) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    let (_, t) = lx.peek()?;
    if t == stop {
        return Ok(out);
    }
    loop {
        out.push(parse_impl(lx)?);
        match lx.peek()? {
            (_, Some(Tok::Comma)) => {
                lx.next()?;
            }
            (_, t) if t == stop => return Ok(out),
            (off, _) => {
                let expected: &[&'static str] = if stop.is_some() {
                    &["\",\"", "\"=>\"", "operator"]
                } else {
                    &["\",\"", "operator", "end of input"]
                };
                return Err(lx.error(off, expected));
            }
        }
    }
}

/// Parses `A1, A2 => B1, B2`; either side may be empty. `⇒` is accepted for `=>`.
pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    let mut lx = Lexer::new(src);
    let ante = parse_side(&mut lx, Some(Tok::Turnstile))?;
    match lx.next()? {
        (_, Some(Tok::Turnstile)) => {}
        (off, _) => return Err(lx.error(off, &["\"=>\""])),
    }
    let succ = parse_side(&mut lx, None)?;
    Ok(Sequent::new(ante, succ))
}

/// A finite multiset of formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaMultiset(BTreeMap<Formula, usize>);

impl FormulaMultiset {
    pub fn count(&self, f: &Formula) -> usize {
        self.0.get(f).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, f: Formula) {
        *self.0.entry(f).or_insert(0) += 1;
    }

    /// Removes one copy; returns false if there was none.
    pub fn remove(&mut self, f: &Formula) -> bool {
        match self.0.get_mut(f) {
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.0.remove(f);
                true
            }
            None => false,
        }
    }

    /// Every element occurs in `other` at least as often.
    pub fn is_submultiset(&self, other: &FormulaMultiset) -> bool {
        self.0.iter().all(|(f, &n)| other.count(f) >= n)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, usize)> {
        self.0.iter().map(|(f, &n)| (f, n))
    }
}

impl FromIterator<Formula> for FormulaMultiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut m = FormulaMultiset::default();
        for f in iter {
            m.insert(f);
        }
        m
    }
}

/// How `a` relates to `b` under the subsequent preorder (`a ⪯ b` when each side of `a`
/// is a submultiset of the same side of `b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsequent {
    /// `a ⪯ b` and the multisets differ.
    StrictlyLess,
    /// Same multisets on both sides.
    EqualAsMultisets,
    /// `a ⪯ b` fails.
    Incomparable,
}

impl Subsequent {
    pub fn holds(self) -> bool {
        !matches!(self, Subsequent::Incomparable)
    }
}

pub fn is_subsequent(a: &Sequent, b: &Sequent) -> Subsequent {
    let (al, ar) = a.multiset();
    let (bl, br) = b.multiset();
    if al == bl && ar == br {
        Subsequent::EqualAsMultisets
    } else if al.is_submultiset(&bl) && ar.is_submultiset(&br) {
        Subsequent::StrictlyLess
    } else {
        Subsequent::Incomparable
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Sequent {
        x.parse().unwrap()
    }

    #[test]
    fn display_round_trip() {
        for src in ["p => p", "=> p", "p =>", "=>", "p, q -> r => ~p, p & q"] {
            assert_eq!(s(src).to_string(), src);
        }
        assert_eq!(s("p,q⇒ r").to_string(), "p, q => r");
        assert_eq!(s("p => (p -> q), r").to_string(), "p => p -> q, r");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_sequent("p, => q").unwrap_err().offset, 3);
        assert_eq!(parse_sequent("p q").unwrap_err().offset, 2);
        assert_eq!(parse_sequent("p").unwrap_err().offset, 1);
        assert_eq!(parse_sequent("p => q =>").unwrap_err().offset, 7);
    }

    #[test]
    fn seqcomp_sums_both_sides() {
        assert_eq!(s("~p, p & q => p -> q").seqcomp(), 5);
    }

    #[test]
    fn subsequent_relation() {
        assert_eq!(
            is_subsequent(&s("p => p"), &s("q, p => p")),
            Subsequent::StrictlyLess
        );
        assert_eq!(
            is_subsequent(&s("p, q => p"), &s("q, p => p")),
            Subsequent::EqualAsMultisets
        );
        assert_eq!(
            is_subsequent(&s("p, p => q"), &s("p => q")),
            Subsequent::Incomparable
        );
        assert_eq!(
            is_subsequent(&s("p => q"), &s("p, p => q")),
            Subsequent::StrictlyLess
        );
    }
}
