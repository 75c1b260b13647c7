//! Decision procedure, cut-free proof construction, unprovability certificates and identity proofs.

use std::collections::HashMap;

use thiserror::Error;

use crate::calculus::{weaken_to, Active, Proof, RuleId};
use crate::formula::{Formula, Var};
use crate::sequent::{Sequent, Side};

/// Default cap on decomposition nodes visited by one call.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("`{0}` is not provable")]
    NotProvable(Sequent),
    #[error("`{0}` is provable")]
    Provable(Sequent),
    #[error("search exceeded its budget of {0} nodes")]
    ResourceLimit(u64),
}

/// The first non-atomic formula, antecedent before succedent, left to right.
pub fn leftmost_compound(s: &Sequent) -> Option<(Side, usize)> {
    if let Some(i) = s.ante.iter().position(|f| !f.is_atomic()) {
        return Some((Side::Ante, i));
    }
    s.succ
        .iter()
        .position(|f| !f.is_atomic())
        .map(|i| (Side::Succ, i))
}

/// The premises obtained by decomposing the formula at `(side, i)`, with the side formulas
/// placed where the matching rule expects them and the rest in original order.
pub fn decompose(s: &Sequent, side: Side, i: usize) -> Vec<Sequent> {
    let mut rest = s.clone();
    let f = rest.side_mut(side).remove(i);
    let front = |xs: &[&Formula]| {
        let mut t = rest.clone();
        let mut ante: Vec<Formula> = xs.iter().map(|f| (*f).clone()).collect();
        ante.extend(t.ante);
        t.ante = ante;
        t
    };
    let back = |xs: &[&Formula]| {
        let mut t = rest.clone();
        t.succ.extend(xs.iter().map(|f| (*f).clone()));
        t
    };
    match (side, &f) {
        (_, Formula::Atom(_)) => panic!("atoms do not decompose"),
        (Side::Ante, Formula::Neg(a)) => vec![back(&[a])],
        (Side::Ante, Formula::Conj(a, b)) => vec![front(&[a, b])],
        (Side::Ante, Formula::Disj(a, b)) => vec![front(&[a]), front(&[b])],
        (Side::Ante, Formula::Impl(a, b)) => vec![back(&[a]), front(&[b])],
        (Side::Succ, Formula::Neg(a)) => vec![front(&[a])],
        (Side::Succ, Formula::Conj(a, b)) => vec![back(&[a]), back(&[b])],
        (Side::Succ, Formula::Disj(a, b)) => vec![back(&[a, b])],
        (Side::Succ, Formula::Impl(a, b)) => {
            let mut t = front(&[a]);
            t.succ.push((**b).clone());
            vec![t]
        }
    }
}

/// A shared variable of an atomic sequent, taking the first in antecedent order.
pub fn shared_atom(s: &Sequent) -> Option<Var> {
    s.ante
        .iter()
        .filter_map(Formula::as_atom)
        .find(|v| s.succ.iter().any(|g| g.as_atom() == Some(v)))
        .cloned()
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), ProverError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(ProverError::ResourceLimit(self.limit));
        }
        Ok(())
    }
}

fn decide_rec(s: Sequent, budget: &mut Budget) -> Result<bool, ProverError> {
    budget.tick()?;
    match leftmost_compound(&s) {
        None => Ok(shared_atom(&s).is_some()),
        Some((side, i)) => {
            for p in decompose(&s, side, i) {
                if !decide_rec(p, budget)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Decides provability in PLK.
pub fn decide(s: &Sequent) -> Result<bool, ProverError> {
    decide_with_budget(s, DEFAULT_NODE_BUDGET)
}

pub fn decide_with_budget(s: &Sequent, limit: u64) -> Result<bool, ProverError> {
    decide_rec(s.clone(), &mut Budget { limit, used: 0 })
}

/// The full decomposition tree explored by [`decide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub sequent: Sequent,
    /// The decomposed formula position; `None` at an atomic leaf.
    pub position: Option<(Side, usize)>,
    pub premises: Vec<Decomposition>,
}

impl Decomposition {
    pub fn provable(&self) -> bool {
        match self.position {
            None => shared_atom(&self.sequent).is_some(),
            Some(_) => self.premises.iter().all(Decomposition::provable),
        }
    }

    pub fn visit(&self, f: &mut dyn FnMut(&Decomposition)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }
}

pub fn decomposition(s: &Sequent) -> Decomposition {
    let position = leftmost_compound(s);
    let premises = match position {
        None => Vec::new(),
        Some((side, i)) => decompose(s, side, i).iter().map(decomposition).collect(),
    };
    Decomposition {
        sequent: s.clone(),
        position,
        premises,
    }
}

/// One step of a certificate: decompose the formula at `position` of `sequent` and follow `branch`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStep {
    pub sequent: Sequent,
    pub position: (Side, usize),
    pub branch: usize,
}

/// A path of invertible decompositions ending in an atomic sequent whose sides share no variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<CertStep>,
    pub leaf: Sequent,
}

pub fn certify_unprovable(s: &Sequent) -> Result<Certificate, ProverError> {
    let mut steps = Vec::new();
    let mut cur = s.clone();
    let mut budget = Budget {
        limit: DEFAULT_NODE_BUDGET,
        used: 0,
    };
    loop {
        let Some((side, i)) = leftmost_compound(&cur) else {
            if shared_atom(&cur).is_some() {
                return Err(ProverError::Provable(s.clone()));
            }
            return Ok(Certificate { steps, leaf: cur });
        };
        let premises = decompose(&cur, side, i);
        let mut failing = None;
        for (b, p) in premises.iter().enumerate() {
            if !decide_rec(p.clone(), &mut budget)? {
                failing = Some(b);
                break;
            }
        }
        let Some(branch) = failing else {
            return Err(ProverError::Provable(s.clone()));
        };
        steps.push(CertStep {
            sequent: cur.clone(),
            position: (side, i),
            branch,
        });
        cur = premises[branch].clone();
    }
}

/// Replays a certificate against `s`.
pub fn verify_certificate(s: &Sequent, cert: &Certificate) -> bool {
    let mut cur = s.clone();
    for step in &cert.steps {
        if step.sequent != cur {
            return false;
        }
        let (side, i) = step.position;
        match cur.side(side).get(i) {
            Some(f) if !f.is_atomic() => {}
            _ => return false,
        }
        let premises = decompose(&cur, side, i);
        match premises.into_iter().nth(step.branch) {
            Some(p) => cur = p,
            None => return false,
        }
    }
    cur == cert.leaf && cur.is_atomic() && shared_atom(&cur).is_none()
}

/// A cut-free proof, built by replaying the decomposition used by [`decide`].
pub fn prove_cutfree(s: &Sequent) -> Result<Proof, ProverError> {
    if !decide(s)? {
        return Err(ProverError::NotProvable(s.clone()));
    }
    build(s)
}

fn build(s: &Sequent) -> Result<Proof, ProverError> {
    let Some((side, i)) = leftmost_compound(s) else {
        let p = shared_atom(s).ok_or_else(|| ProverError::NotProvable(s.clone()))?;
        return Ok(weaken_to(Proof::axiom(Formula::Atom(p)), s).expect("axiom is a subsequent"));
    };
    let f = s.side(side)[i].clone();
    let subs = decompose(s, side, i)
        .iter()
        .map(build)
        .collect::<Result<Vec<_>, _>>()?;
    let mut subs = subs.into_iter();
    let mut one = || subs.next().expect("premise");
    let proof = match (side, &f) {
        (Side::Ante, Formula::Neg(_)) => Proof::unary(RuleId::NegL, f.clone(), one()),
        (Side::Ante, Formula::Conj(..)) => {
            // A, B, G => D  to  A & B, G => D, going through two copies of A & B.
            let p = Proof::unary(RuleId::ConjLLeft, f.clone(), one());
            let p = Proof::swap(Side::Ante, 0, p);
            let p = Proof::unary(RuleId::ConjLRight, f.clone(), p);
            Proof::unary(RuleId::CL, f.clone(), p)
        }
        (Side::Ante, Formula::Disj(..)) => {
            let (l, r) = (one(), one());
            Proof::binary(RuleId::DisjL, Active::Principal(f.clone()), l, r)
        }
        (Side::Ante, Formula::Impl(..)) => {
            let (l, r) = (one(), one());
            Proof::binary(RuleId::ImplL, Active::Principal(f.clone()), l, r)
        }
        (Side::Succ, Formula::Neg(_)) => Proof::unary(RuleId::NegR, f.clone(), one()),
        (Side::Succ, Formula::Conj(..)) => {
            let (l, r) = (one(), one());
            Proof::binary(RuleId::ConjR, Active::Principal(f.clone()), l, r)
        }
        (Side::Succ, Formula::Disj(..)) => {
            let p = Proof::unary(RuleId::DisjRRight, f.clone(), one());
            let n = p.conclusion.succ.len();
            let p = Proof::swap(Side::Succ, n - 2, p);
            let p = Proof::unary(RuleId::DisjRLeft, f.clone(), p);
            Proof::unary(RuleId::CR, f.clone(), p)
        }
        (Side::Succ, Formula::Impl(..)) => Proof::unary(RuleId::ImplR, f.clone(), one()),
        (_, Formula::Atom(_)) => unreachable!("leftmost_compound returns compound formulas"),
    };
    Ok(weaken_to(proof, s).expect("same multisets"))
}

/// Searches for a proof with neither contraction nor cut.
///
/// Invertible decompositions are applied eagerly. Once only atoms and the non-invertible
/// shapes remain (a conjunction on the left or a disjunction on the right, which without
/// contraction keep just one component), every choice is tried. Occurrences equal to
/// `deferred` are decomposed only after all other options fail. Returns `Ok(None)` when
/// no such proof exists.
pub fn prove_contraction_cut_free(s: &Sequent) -> Result<Option<Proof>, ProverError> {
    prove_contraction_cut_free_deferring(s, None)
}

pub fn prove_contraction_cut_free_deferring(
    s: &Sequent,
    deferred: Option<&Formula>,
) -> Result<Option<Proof>, ProverError> {
    let mut search = CcfSearch {
        deferred,
        memo: HashMap::new(),
        limit: DEFAULT_NODE_BUDGET,
    };
    if !search.provable(s)? {
        return Ok(None);
    }
    search.build(s).map(Some)
}

type MemoKey = (Vec<Formula>, Vec<Formula>);

struct CcfSearch<'a> {
    deferred: Option<&'a Formula>,
    memo: HashMap<MemoKey, bool>,
    limit: u64,
}

/// A candidate last step of a contraction+cut-free proof.
enum Move {
    Axiom(Var),
    Rule {
        rule: RuleId,
        principal: Formula,
        premises: Vec<Sequent>,
    },
}

fn lossy(side: Side, f: &Formula) -> bool {
    matches!(
        (side, f),
        (Side::Ante, Formula::Conj(..)) | (Side::Succ, Formula::Disj(..))
    )
}

impl CcfSearch<'_> {
    fn key(s: &Sequent) -> MemoKey {
        let mut a = s.ante.clone();
        let mut b = s.succ.clone();
        a.sort();
        b.sort();
        (a, b)
    }

    fn is_deferred(&self, side: Side, f: &Formula) -> bool {
        side == Side::Ante && self.deferred == Some(f)
    }

    /// Moves to try, in order. When an invertible move exists it is the only one.
    fn moves(&self, s: &Sequent) -> Vec<Move> {
        for side in [Side::Ante, Side::Succ] {
            for (i, f) in s.side(side).iter().enumerate() {
                if !f.is_atomic() && !lossy(side, f) && !self.is_deferred(side, f) {
                    let rule = match (side, f) {
                        (Side::Ante, Formula::Neg(_)) => RuleId::NegL,
                        (Side::Ante, Formula::Disj(..)) => RuleId::DisjL,
                        (Side::Ante, _) => RuleId::ImplL,
                        (Side::Succ, Formula::Neg(_)) => RuleId::NegR,
                        (Side::Succ, Formula::Conj(..)) => RuleId::ConjR,
                        (Side::Succ, _) => RuleId::ImplR,
                    };
                    return vec![Move::Rule {
                        rule,
                        principal: f.clone(),
                        premises: decompose(s, side, i),
                    }];
                }
            }
        }
        let mut out = Vec::new();
        let atoms = Sequent::new(
            s.ante.iter().filter(|f| f.is_atomic()).cloned().collect(),
            s.succ.iter().filter(|f| f.is_atomic()).cloned().collect(),
        );
        if let Some(v) = shared_atom(&atoms) {
            out.push(Move::Axiom(v));
        }
        let mut seen = std::collections::HashSet::new();
        for side in [Side::Ante, Side::Succ] {
            for (i, f) in s.side(side).iter().enumerate() {
                if !lossy(side, f) || !seen.insert((side, f.clone())) {
                    continue;
                }
                let (a, b) = match f {
                    Formula::Conj(a, b) | Formula::Disj(a, b) => ((**a).clone(), (**b).clone()),
                    _ => unreachable!(),
                };
                let mut rest = s.clone();
                rest.side_mut(side).remove(i);
                for (rule, part) in match side {
                    Side::Ante => [
                        (RuleId::ConjLLeft, a.clone()),
                        (RuleId::ConjLRight, b.clone()),
                    ],
                    Side::Succ => [
                        (RuleId::DisjRLeft, a.clone()),
                        (RuleId::DisjRRight, b.clone()),
                    ],
                } {
                    let premise = match side {
                        Side::Ante => rest.with_front(part),
                        Side::Succ => rest.with_back(part),
                    };
                    out.push(Move::Rule {
                        rule,
                        principal: f.clone(),
                        premises: vec![premise],
                    });
                }
            }
        }
        if let Some(d) = self.deferred {
            if let Some(i) = s.ante.iter().position(|f| f == d) {
                if !d.is_atomic() && !lossy(Side::Ante, d) {
                    let rule = match d {
                        Formula::Neg(_) => RuleId::NegL,
                        Formula::Disj(..) => RuleId::DisjL,
                        _ => RuleId::ImplL,
                    };
                    out.push(Move::Rule {
                        rule,
                        principal: d.clone(),
                        premises: decompose(s, Side::Ante, i),
                    });
                }
            }
        }
        out
    }

    fn provable(&mut self, s: &Sequent) -> Result<bool, ProverError> {
        let key = Self::key(s);
        if let Some(&b) = self.memo.get(&key) {
            return Ok(b);
        }
        if self.memo.len() as u64 >= self.limit {
            return Err(ProverError::ResourceLimit(self.limit));
        }
        let mut result = false;
        for m in self.moves(s) {
            let ok = match &m {
                Move::Axiom(_) => true,
                Move::Rule { premises, .. } => {
                    let mut all = true;
                    for p in premises {
                        if !self.provable(p)? {
                            all = false;
                            break;
                        }
                    }
                    all
                }
            };
            if ok {
                result = true;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }

    fn build(&mut self, s: &Sequent) -> Result<Proof, ProverError> {
        for m in self.moves(s) {
            match m {
                Move::Axiom(v) => {
                    return Ok(weaken_to(Proof::axiom(Formula::Atom(v)), s)
                        .expect("axiom is a subsequent"));
                }
                Move::Rule {
                    rule,
                    principal,
                    premises,
                    ..
                } => {
                    let mut ok = true;
                    for p in &premises {
                        if !self.provable(p)? {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let subs = premises
                        .iter()
                        .map(|p| self.build(p))
                        .collect::<Result<Vec<_>, _>>()?;
                    let p = Proof::infer(rule, Active::Principal(principal), subs)
                        .unwrap_or_else(|e| panic!("internal rule misuse: {e}"));
                    return Ok(weaken_to(p, s).expect("same multisets"));
                }
            }
        }
        Err(ProverError::NotProvable(s.clone()))
    }
}

/// A cut-free proof of `A => A` that uses an axiom only on atoms.
pub fn identity_proof(a: &Formula) -> Proof {
    match a {
        Formula::Atom(_) => Proof::axiom(a.clone()),
        Formula::Neg(b) => {
            let p = Proof::unary(RuleId::NegL, a.clone(), identity_proof(b));
            let p = Proof::swap(Side::Ante, 0, p);
            Proof::unary(RuleId::NegR, a.clone(), p)
        }
        Formula::Conj(b, c) => {
            let l = Proof::unary(RuleId::ConjLLeft, a.clone(), identity_proof(b));
            let r = Proof::unary(RuleId::ConjLRight, a.clone(), identity_proof(c));
            Proof::binary(RuleId::ConjR, Active::Principal(a.clone()), l, r)
        }
        Formula::Disj(b, c) => {
            let l = Proof::unary(RuleId::DisjRLeft, a.clone(), identity_proof(b));
            let r = Proof::unary(RuleId::DisjRRight, a.clone(), identity_proof(c));
            Proof::binary(RuleId::DisjL, Active::Principal(a.clone()), l, r)
        }
        Formula::Impl(b, c) => {
            let (b, c) = ((**b).clone(), (**c).clone());
            let l = Proof::unary(RuleId::WR, c.clone(), identity_proof(&b));
            let l = Proof::swap(Side::Succ, 0, l);
            let r = Proof::unary(RuleId::WL, b.clone(), identity_proof(&c));
            let r = Proof::swap(Side::Ante, 0, r);
            let p = Proof::binary(RuleId::ImplL, Active::Principal(a.clone()), l, r);
            let p = Proof::swap(Side::Ante, 0, p);
            Proof::unary(RuleId::ImplR, a.clone(), p)
        }
    }
}
