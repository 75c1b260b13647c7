//! The rules of PLK, rule instances, proof trees and the proof checker.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::sequent::{is_subsequent, Sequent, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    Axiom,
    WL,
    WR,
    CL,
    CR,
    EL,
    ER,
    NegL,
    NegR,
    #[serde(rename = "ConjL_left")]
    ConjLLeft,
    #[serde(rename = "ConjL_right")]
    ConjLRight,
    ConjR,
    DisjL,
    #[serde(rename = "DisjR_left")]
    DisjRLeft,
    #[serde(rename = "DisjR_right")]
    DisjRRight,
    ImplL,
    ImplR,
    CutAdditive,
    CutMultiplicative,
}

impl RuleId {
    pub const ALL: [RuleId; 19] = [
        RuleId::Axiom,
        RuleId::WL,
        RuleId::WR,
        RuleId::CL,
        RuleId::CR,
        RuleId::EL,
        RuleId::ER,
        RuleId::NegL,
        RuleId::NegR,
        RuleId::ConjLLeft,
        RuleId::ConjLRight,
        RuleId::ConjR,
        RuleId::DisjL,
        RuleId::DisjRLeft,
        RuleId::DisjRRight,
        RuleId::ImplL,
        RuleId::ImplR,
        RuleId::CutAdditive,
        RuleId::CutMultiplicative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Axiom => "Axiom",
            RuleId::WL => "WL",
            RuleId::WR => "WR",
            RuleId::CL => "CL",
            RuleId::CR => "CR",
            RuleId::EL => "EL",
            RuleId::ER => "ER",
            RuleId::NegL => "NegL",
            RuleId::NegR => "NegR",
            RuleId::ConjLLeft => "ConjL_left",
            RuleId::ConjLRight => "ConjL_right",
            RuleId::ConjR => "ConjR",
            RuleId::DisjL => "DisjL",
            RuleId::DisjRLeft => "DisjR_left",
            RuleId::DisjRRight => "DisjR_right",
            RuleId::ImplL => "ImplL",
            RuleId::ImplR => "ImplR",
            RuleId::CutAdditive => "CutAdditive",
            RuleId::CutMultiplicative => "CutMultiplicative",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            RuleId::Axiom => 0,
            RuleId::ConjR
            | RuleId::DisjL
            | RuleId::ImplL
            | RuleId::CutAdditive
            | RuleId::CutMultiplicative => 2,
            _ => 1,
        }
    }

    pub fn is_cut(self) -> bool {
        matches!(self, RuleId::CutAdditive | RuleId::CutMultiplicative)
    }

    pub fn is_contraction(self) -> bool {
        matches!(self, RuleId::CL | RuleId::CR)
    }

    /// The side holding the principal formula of the conclusion, if the rule has one.
    pub fn principal_side(self) -> Option<Side> {
        match self {
            RuleId::WL
            | RuleId::CL
            | RuleId::NegL
            | RuleId::ConjLLeft
            | RuleId::ConjLRight
            | RuleId::DisjL
            | RuleId::ImplL => Some(Side::Ante),
            RuleId::WR
            | RuleId::CR
            | RuleId::NegR
            | RuleId::ConjR
            | RuleId::DisjRLeft
            | RuleId::DisjRRight
            | RuleId::ImplR => Some(Side::Succ),
            _ => None,
        }
    }

    /// Logical rules introduce a connective.
    pub fn is_logical(self) -> bool {
        matches!(
            self,
            RuleId::NegL
                | RuleId::NegR
                | RuleId::ConjLLeft
                | RuleId::ConjLRight
                | RuleId::ConjR
                | RuleId::DisjL
                | RuleId::DisjRLeft
                | RuleId::DisjRRight
                | RuleId::ImplL
                | RuleId::ImplR
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule {0:?}")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<RuleId, UnknownRule> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// Bookkeeping that pins down a rule application beyond its rule name.
///
/// Axioms, weakenings, contractions and logical rules record their principal formula
/// (for an axiom, the atom). Exchanges record the index of the first of the two swapped
/// positions in the conclusion. Cuts record the cut formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Active {
    Principal(Formula),
    Swap(usize),
    Cut(Formula),
}

/// Why a single rule application is not an instance of its rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule}: {reason}")]
pub struct RuleViolation {
    pub rule: RuleId,
    pub reason: String,
}

fn violation(rule: RuleId, reason: impl Into<String>) -> RuleViolation {
    RuleViolation {
        rule,
        reason: reason.into(),
    }
}

fn split_front(xs: &[Formula]) -> Option<(&Formula, &[Formula])> {
    xs.split_first()
}

fn split_back(xs: &[Formula]) -> Option<(&[Formula], &Formula)> {
    xs.split_last().map(|(l, rest)| (rest, l))
}

fn cat(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// Computes the conclusion of a rule application from its premises and active data.
pub fn conclude(
    rule: RuleId,
    active: &Active,
    premises: &[&Sequent],
) -> Result<Sequent, RuleViolation> {
    let v = |reason: &str| violation(rule, reason);
    if premises.len() != rule.arity() {
        return Err(v(&format!(
            "expected {} premise(s), found {}",
            rule.arity(),
            premises.len()
        )));
    }
    let principal = || match active {
        Active::Principal(f) => Ok(f),
        _ => Err(v("missing principal formula")),
    };
    let cut = || match active {
        Active::Cut(f) => Ok(f),
        _ => Err(v("missing cut formula")),
    };
    let p0 = premises.first().copied();
    let p1 = premises.get(1).copied();
    match rule {
        RuleId::Axiom => {
            let a = principal()?;
            if !a.is_atomic() {
                return Err(v("axiom formula must be atomic"));
            }
            Ok(Sequent::new(vec![a.clone()], vec![a.clone()]))
        }
        RuleId::WL => Ok(p0.unwrap().with_front(principal()?.clone())),
        RuleId::WR => Ok(p0.unwrap().with_back(principal()?.clone())),
        RuleId::CL => {
            let a = principal()?;
            let p = p0.unwrap();
            if p.ante.len() < 2 || &p.ante[0] != a || &p.ante[1] != a {
                return Err(v(
                    "premise must begin with two copies of the principal formula",
                ));
            }
            Ok(Sequent::new(p.ante[1..].to_vec(), p.succ.clone()))
        }
        RuleId::CR => {
            let a = principal()?;
            let p = p0.unwrap();
            let n = p.succ.len();
            if n < 2 || &p.succ[n - 1] != a || &p.succ[n - 2] != a {
                return Err(v(
                    "premise must end with two copies of the principal formula",
                ));
            }
            Ok(Sequent::new(p.ante.clone(), p.succ[..n - 1].to_vec()))
        }
        RuleId::EL | RuleId::ER => {
            let Active::Swap(i) = *active else {
                return Err(v("missing swap position"));
            };
            let side = if rule == RuleId::EL {
                Side::Ante
            } else {
                Side::Succ
            };
            let mut c = p0.unwrap().clone();
            let xs = c.side_mut(side);
            if i + 1 >= xs.len() {
                return Err(v("swap position out of range"));
            }
            xs.swap(i, i + 1);
            Ok(c)
        }
        RuleId::NegL => {
            let Formula::Neg(a) = principal()? else {
                return Err(v("principal formula must be a negation"));
            };
            let p = p0.unwrap();
            let (delta, last) =
                split_back(&p.succ).ok_or_else(|| v("premise succedent is empty"))?;
            if last != &**a {
                return Err(v("premise must end with the negated formula"));
            }
            Ok(Sequent::new(
                cat(&[principal()?.clone()], &p.ante),
                delta.to_vec(),
            ))
        }
        RuleId::NegR => {
            let Formula::Neg(a) = principal()? else {
                return Err(v("principal formula must be a negation"));
            };
            let p = p0.unwrap();
            let (first, gamma) =
                split_front(&p.ante).ok_or_else(|| v("premise antecedent is empty"))?;
            if first != &**a {
                return Err(v("premise must begin with the negated formula"));
            }
            Ok(Sequent::new(
                gamma.to_vec(),
                cat(&p.succ, &[principal()?.clone()]),
            ))
        }
        RuleId::ConjLLeft | RuleId::ConjLRight | RuleId::DisjL => {
            let f = principal()?;
            let (a, b) = match (rule, f) {
                (RuleId::DisjL, Formula::Disj(a, b)) => (a, b),
                (RuleId::ConjLLeft | RuleId::ConjLRight, Formula::Conj(a, b)) => (a, b),
                _ => return Err(v("principal formula has the wrong connective")),
            };
            let p = p0.unwrap();
            let (first, gamma) =
                split_front(&p.ante).ok_or_else(|| v("premise antecedent is empty"))?;
            let want = if rule == RuleId::ConjLRight { b } else { a };
            if first != &**want {
                return Err(v("first premise must begin with the side formula"));
            }
            if rule == RuleId::DisjL {
                let q = p1.unwrap();
                let (first, gamma2) =
                    split_front(&q.ante).ok_or_else(|| v("premise antecedent is empty"))?;
                if first != &**b || gamma2 != gamma || q.succ != p.succ {
                    return Err(v("second premise does not match"));
                }
            }
            Ok(Sequent::new(
                cat(std::slice::from_ref(f), gamma),
                p.succ.clone(),
            ))
        }
        RuleId::ConjR | RuleId::DisjRLeft | RuleId::DisjRRight => {
            let f = principal()?;
            let (a, b) = match (rule, f) {
                (RuleId::ConjR, Formula::Conj(a, b)) => (a, b),
                (RuleId::DisjRLeft | RuleId::DisjRRight, Formula::Disj(a, b)) => (a, b),
                _ => return Err(v("principal formula has the wrong connective")),
            };
            let p = p0.unwrap();
            let (delta, last) =
                split_back(&p.succ).ok_or_else(|| v("premise succedent is empty"))?;
            let want = if rule == RuleId::DisjRRight { b } else { a };
            if last != &**want {
                return Err(v("first premise must end with the side formula"));
            }
            if rule == RuleId::ConjR {
                let q = p1.unwrap();
                let (delta2, last) =
                    split_back(&q.succ).ok_or_else(|| v("premise succedent is empty"))?;
                if last != &**b || delta2 != delta || q.ante != p.ante {
                    return Err(v("second premise does not match"));
                }
            }
            Ok(Sequent::new(
                p.ante.clone(),
                cat(delta, std::slice::from_ref(f)),
            ))
        }
        RuleId::ImplL => {
            let f = principal()?;
            let Formula::Impl(a, b) = f else {
                return Err(v("principal formula must be an implication"));
            };
            let (p, q) = (p0.unwrap(), p1.unwrap());
            let (delta, last) =
                split_back(&p.succ).ok_or_else(|| v("premise succedent is empty"))?;
            let (first, gamma) =
                split_front(&q.ante).ok_or_else(|| v("premise antecedent is empty"))?;
            if last != &**a || first != &**b {
                return Err(v("side formulas do not match"));
            }
            if gamma != p.ante.as_slice() || delta != q.succ.as_slice() {
                return Err(v("premise contexts differ"));
            }
            Ok(Sequent::new(
                cat(std::slice::from_ref(f), gamma),
                delta.to_vec(),
            ))
        }
        RuleId::ImplR => {
            let f = principal()?;
            let Formula::Impl(a, b) = f else {
                return Err(v("principal formula must be an implication"));
            };
            let p = p0.unwrap();
            let (first, gamma) =
                split_front(&p.ante).ok_or_else(|| v("premise antecedent is empty"))?;
            let (delta, last) =
                split_back(&p.succ).ok_or_else(|| v("premise succedent is empty"))?;
            if first != &**a || last != &**b {
                return Err(v("side formulas do not match"));
            }
            Ok(Sequent::new(
                gamma.to_vec(),
                cat(delta, std::slice::from_ref(f)),
            ))
        }
        RuleId::CutAdditive | RuleId::CutMultiplicative => {
            let a = cut()?;
            let (p, q) = (p0.unwrap(), p1.unwrap());
            let (delta, last) =
                split_back(&p.succ).ok_or_else(|| v("left premise succedent is empty"))?;
            let (first, gamma2) =
                split_front(&q.ante).ok_or_else(|| v("right premise antecedent is empty"))?;
            if last != a || first != a {
                return Err(v("cut formula does not match the premises"));
            }
            if rule == RuleId::CutAdditive {
                if gamma2 != p.ante.as_slice() || delta != q.succ.as_slice() {
                    return Err(v("premise contexts differ"));
                }
                Ok(Sequent::new(p.ante.clone(), delta.to_vec()))
            } else {
                Ok(Sequent::new(cat(&p.ante, gamma2), cat(delta, &q.succ)))
            }
        }
    }
}

/// Recovers the active data of an application from its shape, for input that omits it.
pub fn infer_active(
    rule: RuleId,
    premises: &[&Sequent],
    conclusion: &Sequent,
) -> Result<Active, RuleViolation> {
    let missing = || violation(rule, "cannot determine the active formula");
    match rule {
        RuleId::Axiom
        | RuleId::WL
        | RuleId::CL
        | RuleId::NegL
        | RuleId::ConjLLeft
        | RuleId::ConjLRight
        | RuleId::DisjL
        | RuleId::ImplL => conclusion
            .ante
            .first()
            .cloned()
            .map(Active::Principal)
            .ok_or_else(missing),
        RuleId::WR
        | RuleId::CR
        | RuleId::NegR
        | RuleId::ConjR
        | RuleId::DisjRLeft
        | RuleId::DisjRRight
        | RuleId::ImplR => conclusion
            .succ
            .last()
            .cloned()
            .map(Active::Principal)
            .ok_or_else(missing),
        RuleId::EL | RuleId::ER => {
            let side = if rule == RuleId::EL {
                Side::Ante
            } else {
                Side::Succ
            };
            let p = premises.first().ok_or_else(missing)?;
            let (xs, ys) = (p.side(side), conclusion.side(side));
            if xs.len() < 2 {
                return Err(missing());
            }
            let i = xs.iter().zip(ys).position(|(x, y)| x != y).unwrap_or(0);
            Ok(Active::Swap(i.min(xs.len() - 2)))
        }
        RuleId::CutAdditive | RuleId::CutMultiplicative => premises
            .first()
            .and_then(|p| p.succ.last())
            .cloned()
            .map(Active::Cut)
            .ok_or_else(missing),
    }
}

/// Checks one application against its rule schema.
pub fn check_step(
    rule: RuleId,
    active: &Active,
    premises: &[&Sequent],
    conclusion: &Sequent,
) -> Result<(), RuleViolation> {
    let expected = conclude(rule, active, premises)?;
    if &expected != conclusion {
        return Err(violation(
            rule,
            format!("conclusion should be `{expected}`, found `{conclusion}`"),
        ));
    }
    Ok(())
}

/// A single rule application with its premises and conclusion spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub active: Active,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

impl RuleInstance {
    pub fn new(
        rule: RuleId,
        active: Active,
        premises: Vec<Sequent>,
    ) -> Result<RuleInstance, RuleViolation> {
        let refs: Vec<&Sequent> = premises.iter().collect();
        let conclusion = conclude(rule, &active, &refs)?;
        Ok(RuleInstance {
            rule,
            active,
            premises,
            conclusion,
        })
    }

    pub fn cut_formula(&self) -> Option<&Formula> {
        match &self.active {
            Active::Cut(f) if self.rule.is_cut() => Some(f),
            _ => None,
        }
    }
}

pub fn check_instance(inst: &RuleInstance) -> Result<(), RuleViolation> {
    let refs: Vec<&Sequent> = inst.premises.iter().collect();
    check_step(inst.rule, &inst.active, &refs, &inst.conclusion)
}

/// A proof tree. Every node is a rule application whose premises are the conclusions of its children.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proof {
    pub rule: RuleId,
    pub active: Active,
    pub conclusion: Sequent,
    pub premises: Vec<Proof>,
}

/// A proof node that fails to check, addressed by child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid step at {}: {violation}", path_str(.path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub violation: RuleViolation,
}

fn path_str(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("root/{}", parts.join("/"))
    }
}

impl Proof {
    pub fn axiom(p: Formula) -> Proof {
        assert!(p.is_atomic(), "axioms are atomic");
        Proof {
            rule: RuleId::Axiom,
            conclusion: Sequent::new(vec![p.clone()], vec![p.clone()]),
            active: Active::Principal(p),
            premises: Vec::new(),
        }
    }

    /// Applies a rule to already built subproofs, computing the conclusion.
    pub fn infer(
        rule: RuleId,
        active: Active,
        premises: Vec<Proof>,
    ) -> Result<Proof, RuleViolation> {
        let refs: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        let conclusion = conclude(rule, &active, &refs)?;
        Ok(Proof {
            rule,
            active,
            conclusion,
            premises,
        })
    }

    /// Unary rule with a principal formula. Panics if the schema does not match; callers
    /// use this only where the premise shape is known.
    pub(crate) fn unary(rule: RuleId, principal: Formula, premise: Proof) -> Proof {
        Proof::infer(rule, Active::Principal(principal), vec![premise])
            .unwrap_or_else(|e| panic!("internal rule misuse: {e}"))
    }

    pub(crate) fn binary(rule: RuleId, active: Active, left: Proof, right: Proof) -> Proof {
        Proof::infer(rule, active, vec![left, right])
            .unwrap_or_else(|e| panic!("internal rule misuse: {e}"))
    }

    pub(crate) fn swap(side: Side, i: usize, premise: Proof) -> Proof {
        let rule = if side == Side::Ante {
            RuleId::EL
        } else {
            RuleId::ER
        };
        Proof::infer(rule, Active::Swap(i), vec![premise])
            .unwrap_or_else(|e| panic!("internal rule misuse: {e}"))
    }

    pub fn cut_formula(&self) -> Option<&Formula> {
        match &self.active {
            Active::Cut(f) if self.rule.is_cut() => Some(f),
            _ => None,
        }
    }

    pub fn instance(&self) -> RuleInstance {
        RuleInstance {
            rule: self.rule,
            active: self.active.clone(),
            premises: self.premises.iter().map(|p| p.conclusion.clone()).collect(),
            conclusion: self.conclusion.clone(),
        }
    }

    /// Leaf-to-root height: an axiom has height 0.
    pub fn height(&self) -> usize {
        self.premises
            .iter()
            .map(|p| p.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    /// Largest complexity of a cut formula; 0 for a cut-free proof.
    pub fn degree(&self) -> usize {
        let here = self.cut_formula().map_or(0, Formula::comp);
        self.premises
            .iter()
            .map(Proof::degree)
            .fold(here, usize::max)
    }

    pub fn rules_used(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            out.insert(p.rule);
        });
        out
    }

    pub fn uses(&self, rule: RuleId) -> bool {
        self.rule == rule || self.premises.iter().any(|p| p.uses(rule))
    }

    pub fn is_cut_free(&self) -> bool {
        !self.uses(RuleId::CutAdditive) && !self.uses(RuleId::CutMultiplicative)
    }

    pub fn is_contraction_free(&self) -> bool {
        !self.uses(RuleId::CL) && !self.uses(RuleId::CR)
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Proof)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    pub fn subproof(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.subproof(rest),
        }
    }

    pub(crate) fn subproof_mut(&mut self, path: &[usize]) -> Option<&mut Proof> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.subproof_mut(rest),
        }
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render_ascii(self))
    }
}

/// Checks every node of a proof. Leaves must be axioms.
pub fn check_proof(p: &Proof) -> Result<(), CheckError> {
    let mut path = Vec::new();
    check_rec(p, &mut path)
}

fn check_rec(p: &Proof, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let refs: Vec<&Sequent> = p.premises.iter().map(|c| &c.conclusion).collect();
    check_step(p.rule, &p.active, &refs, &p.conclusion).map_err(|violation| CheckError {
        path: path.clone(),
        violation,
    })?;
    for (i, c) in p.premises.iter().enumerate() {
        path.push(i);
        check_rec(c, path)?;
        path.pop();
    }
    Ok(())
}

/// A proof tree whose leaves may also be open hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Open(Sequent),
    Step {
        rule: RuleId,
        active: Active,
        conclusion: Sequent,
        premises: Vec<Derivation>,
    },
}

impl Derivation {
    pub fn conclusion(&self) -> &Sequent {
        match self {
            Derivation::Open(s) => s,
            Derivation::Step { conclusion, .. } => conclusion,
        }
    }

    fn infer(
        rule: RuleId,
        active: Active,
        premises: Vec<Derivation>,
    ) -> Result<Derivation, RuleViolation> {
        let refs: Vec<&Sequent> = premises.iter().map(Derivation::conclusion).collect();
        let conclusion = conclude(rule, &active, &refs)?;
        Ok(Derivation::Step {
            rule,
            active,
            conclusion,
            premises,
        })
    }

    pub fn open_leaves(&self) -> Vec<&Sequent> {
        let mut out = Vec::new();
        self.collect_open(&mut out);
        out
    }

    fn collect_open<'a>(&'a self, out: &mut Vec<&'a Sequent>) {
        match self {
            Derivation::Open(s) => out.push(s),
            Derivation::Step { premises, .. } => premises.iter().for_each(|p| p.collect_open(out)),
        }
    }

    /// The rule applications from the open leaf down, for a single-branch derivation.
    pub fn steps(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Derivation::Step { rule, premises, .. } = cur {
            out.push(*rule);
            match premises.first() {
                Some(p) => cur = p,
                None => break,
            }
        }
        out.reverse();
        out
    }

    pub fn check(&self) -> Result<(), CheckError> {
        fn rec(d: &Derivation, path: &mut Vec<usize>) -> Result<(), CheckError> {
            let Derivation::Step {
                rule,
                active,
                conclusion,
                premises,
            } = d
            else {
                return Ok(());
            };
            let refs: Vec<&Sequent> = premises.iter().map(Derivation::conclusion).collect();
            check_step(*rule, active, &refs, conclusion).map_err(|violation| CheckError {
                path: path.clone(),
                violation,
            })?;
            for (i, c) in premises.iter().enumerate() {
                path.push(i);
                rec(c, path)?;
                path.pop();
            }
            Ok(())
        }
        rec(self, &mut Vec::new())
    }

    /// Replaces every open leaf by a proof of it.
    pub fn close(
        self,
        supply: &mut dyn FnMut(&Sequent) -> Option<Proof>,
    ) -> Result<Proof, OpenLeaf> {
        match self {
            Derivation::Open(s) => match supply(&s) {
                Some(p) if p.conclusion == s => Ok(p),
                _ => Err(OpenLeaf(s)),
            },
            Derivation::Step {
                rule,
                active,
                conclusion,
                premises,
            } => {
                let premises = premises
                    .into_iter()
                    .map(|d| d.close(supply))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Proof {
                    rule,
                    active,
                    conclusion,
                    premises,
                })
            }
        }
    }

    /// Closes a derivation whose open leaves all equal the conclusion of `proof`.
    pub fn apply_to(self, proof: Proof) -> Result<Proof, OpenLeaf> {
        let mut supply = |s: &Sequent| (s == &proof.conclusion).then(|| proof.clone());
        self.close(&mut supply)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no proof supplied for open leaf `{0}`")]
pub struct OpenLeaf(pub Sequent);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{from}` is not a subsequent of `{to}`")]
pub struct NotSubsequent {
    pub from: Sequent,
    pub to: Sequent,
}

/// A structural step used while rearranging a sequent.
#[derive(Debug, Clone)]
enum Structural {
    Weaken(Side, Formula),
    Swap(Side, usize),
}

/// Plans the weakenings and exchanges that turn `from` into `to`.
///
/// Missing formulas are added with WL at the far left and WR at the far right, then
/// adjacent exchanges move every formula to its target position. Occurrences of equal
/// formulas keep their relative order.
fn plan(from: &Sequent, to: &Sequent) -> Result<Vec<Structural>, NotSubsequent> {
    if !is_subsequent(from, to).holds() {
        return Err(NotSubsequent {
            from: from.clone(),
            to: to.clone(),
        });
    }
    let mut steps = Vec::new();
    for side in [Side::Ante, Side::Succ] {
        let src = from.side(side);
        let dst = to.side(side);
        let mut avail = crate::sequent::FormulaMultiset::from_iter(src.iter().cloned());
        let mut extras = Vec::new();
        for f in dst {
            if !avail.remove(f) {
                extras.push(f.clone());
            }
        }
        let mut cur: Vec<Formula> = Vec::with_capacity(dst.len());
        match side {
            Side::Ante => {
                for f in extras.iter().rev() {
                    steps.push(Structural::Weaken(side, f.clone()));
                }
                cur.extend(extras.iter().cloned());
                cur.extend(src.iter().cloned());
            }
            Side::Succ => {
                cur.extend(src.iter().cloned());
                for f in &extras {
                    steps.push(Structural::Weaken(side, f.clone()));
                }
                cur.extend(extras.iter().cloned());
            }
        }
        // Stable assignment of current positions to target positions.
        let mut targets: std::collections::HashMap<&Formula, std::collections::VecDeque<usize>> =
            std::collections::HashMap::new();
        for (j, f) in dst.iter().enumerate() {
            targets.entry(f).or_default().push_back(j);
        }
        let mut perm: Vec<usize> = cur
            .iter()
            .map(|f| {
                targets
                    .get_mut(f)
                    .and_then(|q| q.pop_front())
                    .expect("multisets agree")
            })
            .collect();
        let n = perm.len();
        for end in (1..n).rev() {
            for j in 0..end {
                if perm[j] > perm[j + 1] {
                    perm.swap(j, j + 1);
                    steps.push(Structural::Swap(side, j));
                }
            }
        }
    }
    Ok(steps)
}

/// A derivation from the open hypothesis `from` to `to` that uses only WL, WR, EL and ER.
/// Fails unless `from ⪯ to`.
pub fn derive_by_weakening_exchange(
    from: &Sequent,
    to: &Sequent,
) -> Result<Derivation, NotSubsequent> {
    let mut d = Derivation::Open(from.clone());
    for step in plan(from, to)? {
        let (rule, active) = structural_rule(step);
        d = Derivation::infer(rule, active, vec![d]).expect("planned step is well formed");
    }
    debug_assert_eq!(d.conclusion(), to);
    Ok(d)
}

fn structural_rule(step: Structural) -> (RuleId, Active) {
    match step {
        Structural::Weaken(Side::Ante, f) => (RuleId::WL, Active::Principal(f)),
        Structural::Weaken(Side::Succ, f) => (RuleId::WR, Active::Principal(f)),
        Structural::Swap(Side::Ante, i) => (RuleId::EL, Active::Swap(i)),
        Structural::Swap(Side::Succ, i) => (RuleId::ER, Active::Swap(i)),
    }
}

/// Extends a proof by weakenings and exchanges so that it ends in `to`.
pub fn weaken_to(proof: Proof, to: &Sequent) -> Result<Proof, NotSubsequent> {
    let mut p = proof;
    for step in plan(&p.conclusion, to)? {
        let (rule, active) = structural_rule(step);
        p = Proof::infer(rule, active, vec![p]).expect("planned step is well formed");
    }
    debug_assert_eq!(&p.conclusion, to);
    Ok(p)
}
