//! Rewriting a proof by following formula occurrences upward.
//!
//! A set of occurrences on one side of the end-sequent is traced through the proof to
//! the places where they are introduced. Each traced occurrence is replaced by a fixed
//! list of formulas (prepended to the antecedent and appended to the succedent). Rules
//! acting on other formulas are re-applied in the new context, weakenings of a traced
//! occurrence become weakenings of its replacement, and contractions of a traced
//! occurrence become contractions of the replacement. No rule is introduced that the
//! input does not already use, apart from weakening and exchange.

use crate::calculus::{Proof, RuleId};
use crate::formula::Formula;
use crate::sequent::{Sequent, Side};

use super::{arrange, TransformError};

/// What to do where a traced occurrence is the principal formula of a logical rule.
#[derive(Debug, Clone)]
pub(crate) enum AtIntro {
    /// Keep the given premise of a binary rule (premise 0 of a unary one).
    KeepPremise(usize),
    /// The occurrence is `A -> A`: at its introduction keep whichever premise lets the
    /// side occurrence of `A` be dropped in turn.
    DropIdentityImplication,
    Fail,
}

#[derive(Debug, Clone)]
pub(crate) struct Lift {
    pub side: Side,
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
    pub at_intro: AtIntro,
}

/// Number of side formulas a premise carries in front of its antecedent context and
/// behind its succedent context.
fn margins(rule: RuleId, premise: usize) -> (usize, usize) {
    match (rule, premise) {
        (RuleId::CL, _) => (2, 0),
        (RuleId::CR, _) => (0, 2),
        (RuleId::NegL, _) => (0, 1),
        (RuleId::NegR, _) => (1, 0),
        (RuleId::ConjLLeft | RuleId::ConjLRight | RuleId::DisjL, _) => (1, 0),
        (RuleId::ConjR | RuleId::DisjRLeft | RuleId::DisjRRight, _) => (0, 1),
        (RuleId::ImplL, 0) => (0, 1),
        (RuleId::ImplL, _) => (1, 0),
        (RuleId::ImplR, _) => (1, 1),
        (RuleId::CutAdditive | RuleId::CutMultiplicative, 0) => (0, 1),
        (RuleId::CutAdditive | RuleId::CutMultiplicative, _) => (1, 0),
        _ => (0, 0),
    }
}

/// Position of the principal formula in the conclusion, if the rule has one.
fn principal_pos(p: &Proof) -> Option<(Side, usize)> {
    match p.rule.principal_side()? {
        Side::Ante => Some((Side::Ante, 0)),
        Side::Succ => Some((Side::Succ, p.conclusion.succ.len() - 1)),
    }
}

/// Premise positions of a conclusion position that is not the principal formula.
fn context_ancestors(p: &Proof, side: Side, pos: usize) -> Vec<(usize, usize)> {
    match p.rule {
        RuleId::Axiom => Vec::new(),
        RuleId::EL | RuleId::ER => {
            let swapped_side = if p.rule == RuleId::EL {
                Side::Ante
            } else {
                Side::Succ
            };
            let crate::calculus::Active::Swap(i) = p.active else {
                unreachable!("exchange carries a swap position")
            };
            let q = if side != swapped_side {
                pos
            } else if pos == i {
                i + 1
            } else if pos == i + 1 {
                i
            } else {
                pos
            };
            vec![(0, q)]
        }
        RuleId::CutMultiplicative => {
            let left = &p.premises[0].conclusion;
            match side {
                Side::Ante if pos < left.ante.len() => vec![(0, pos)],
                Side::Ante => vec![(1, pos - left.ante.len() + 1)],
                Side::Succ if pos < left.succ.len() - 1 => vec![(0, pos)],
                Side::Succ => vec![(1, pos - (left.succ.len() - 1))],
            }
        }
        rule => {
            let shift =
                usize::from(rule.principal_side() == Some(Side::Ante) && side == Side::Ante);
            (0..p.premises.len())
                .map(|j| {
                    let q = match side {
                        Side::Ante => pos - shift + margins(rule, j).0,
                        Side::Succ => pos,
                    };
                    (j, q)
                })
                .collect()
        }
    }
}

impl Lift {
    /// `s` with the occurrences at `tracked` replaced.
    pub(crate) fn target(&self, s: &Sequent, tracked: &[usize]) -> Sequent {
        let mut out = s.clone();
        let xs = out.side_mut(self.side);
        let mut sorted = tracked.to_vec();
        sorted.sort_unstable();
        for &t in sorted.iter().rev() {
            xs.remove(t);
        }
        let k = tracked.len();
        let mut ante = Vec::new();
        for _ in 0..k {
            ante.extend(self.left.iter().cloned());
        }
        ante.append(&mut out.ante);
        out.ante = ante;
        for _ in 0..k {
            out.succ.extend(self.right.iter().cloned());
        }
        out
    }

    /// Rewrites `p`, replacing the occurrences at `tracked` (positions on `self.side`).
    /// The result proves exactly `self.target(&p.conclusion, tracked)`.
    pub(crate) fn run(&self, p: &Proof, tracked: &[usize]) -> Result<Proof, TransformError> {
        if tracked.is_empty() {
            return Ok(p.clone());
        }
        let goal = self.target(&p.conclusion, tracked);
        if p.rule == RuleId::Axiom {
            return Err(TransformError::NotRemovable(p.conclusion.clone()));
        }
        let principal = principal_pos(p).filter(|&(s, i)| s == self.side && tracked.contains(&i));
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); p.premises.len()];
        for &t in tracked {
            if principal == Some((self.side, t)) {
                continue;
            }
            for (j, q) in context_ancestors(p, self.side, t) {
                up[j].push(q);
            }
        }

        if principal.is_some() {
            return match p.rule {
                RuleId::WL | RuleId::WR => {
                    let sub = self.run(&p.premises[0], &up[0])?;
                    Ok(arrange(sub, &goal))
                }
                RuleId::CL | RuleId::CR => {
                    let n = p.premises[0].conclusion.succ.len();
                    let copies = if p.rule == RuleId::CL {
                        [0, 1]
                    } else {
                        [n - 2, n - 1]
                    };
                    up[0].extend(copies);
                    let mut sub = self.run(&p.premises[0], &up[0])?;
                    for f in &self.left {
                        sub = contract(sub, Side::Ante, f);
                    }
                    for f in &self.right {
                        sub = contract(sub, Side::Succ, f);
                    }
                    Ok(arrange(sub, &goal))
                }
                _ => self.at_introduction(p, &up, &goal),
            };
        }

        if matches!(p.rule, RuleId::EL | RuleId::ER) {
            let sub = self.run(&p.premises[0], &up[0])?;
            return Ok(arrange(sub, &goal));
        }

        let mut subs = Vec::with_capacity(p.premises.len());
        for (j, child) in p.premises.iter().enumerate() {
            let sub = self.run(child, &up[j])?;
            subs.push(arrange(
                sub,
                &self.reshaped_premise(p.rule, j, &child.conclusion, &up[j]),
            ));
        }
        let rebuilt = Proof::infer(p.rule, p.active.clone(), subs)
            .unwrap_or_else(|e| panic!("internal rebuild failed: {e}"));
        Ok(arrange(rebuilt, &goal))
    }

    /// The premise shape the rule needs once its context has been rewritten.
    fn reshaped_premise(
        &self,
        rule: RuleId,
        j: usize,
        premise: &Sequent,
        tracked: &[usize],
    ) -> Sequent {
        let (k, m) = margins(rule, j);
        let n = premise.succ.len();
        let ctx = Sequent::new(premise.ante[k..].to_vec(), premise.succ[..n - m].to_vec());
        let shifted: Vec<usize> = tracked
            .iter()
            .map(|&t| if self.side == Side::Ante { t - k } else { t })
            .collect();
        let new_ctx = self.target(&ctx, &shifted);
        let mut ante = premise.ante[..k].to_vec();
        ante.extend(new_ctx.ante);
        let mut succ = new_ctx.succ;
        succ.extend_from_slice(&premise.succ[n - m..]);
        Sequent::new(ante, succ)
    }

    fn at_introduction(
        &self,
        p: &Proof,
        up: &[Vec<usize>],
        goal: &Sequent,
    ) -> Result<Proof, TransformError> {
        match &self.at_intro {
            AtIntro::Fail => Err(TransformError::NotRemovable(p.conclusion.clone())),
            AtIntro::KeepPremise(component) => {
                let j = if p.premises.len() == 2 { *component } else { 0 };
                let sub = self.run(&p.premises[j], &up[j])?;
                Ok(arrange(sub, goal))
            }
            AtIntro::DropIdentityImplication => {
                if p.rule != RuleId::ImplL {
                    return Err(TransformError::NotRemovable(p.conclusion.clone()));
                }
                let strip = |side: Side| Lift {
                    side,
                    left: Vec::new(),
                    right: Vec::new(),
                    at_intro: AtIntro::Fail,
                };
                let left = self.run(&p.premises[0], &up[0])?;
                let last = left.conclusion.succ.len() - 1;
                if let Ok(q) = strip(Side::Succ).run(&left, &[last]) {
                    return Ok(arrange(q, goal));
                }
                let right = self.run(&p.premises[1], &up[1])?;
                match strip(Side::Ante).run(&right, &[0]) {
                    Ok(q) => Ok(arrange(q, goal)),
                    Err(_) => Err(TransformError::NotRemovable(p.conclusion.clone())),
                }
            }
        }
    }
}

/// Contracts one pair of copies of `f` on `side`.
fn contract(p: Proof, side: Side, f: &Formula) -> Proof {
    let mut shape = p.conclusion.clone();
    let xs = shape.side_mut(side);
    for _ in 0..2 {
        let i = xs.iter().position(|g| g == f).expect("two copies present");
        xs.remove(i);
    }
    match side {
        Side::Ante => {
            xs.insert(0, f.clone());
            xs.insert(0, f.clone());
        }
        Side::Succ => {
            xs.push(f.clone());
            xs.push(f.clone());
        }
    }
    let rule = if side == Side::Ante {
        RuleId::CL
    } else {
        RuleId::CR
    };
    Proof::unary(rule, f.clone(), arrange(p, &shape))
}
