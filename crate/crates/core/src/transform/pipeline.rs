//! Removing contraction and cut together.
//!
//! The pipeline turns any proof of `G => D` into one with neither contraction nor cut,
//! going through a proof of `A -> A, G => D` for a variable `A` of the end-sequent:
//!
//! 1. multiplicative cuts become additive and contractions become cuts;
//! 2. `A -> A` is weakened in and a contraction+cut-free proof of `A -> A, G => D`
//!    is reconstructed ([`part_one`]);
//! 3. the `A -> A` occurrence is traced upward and removed ([`part_two`]).
//!
//! Step 3 only succeeds when `G => D` itself has such a proof. Sequents like
//! `=> p | ~p` are provable but every proof of them contracts or cuts, and for those
//! the pipeline reports [`TransformError::ContractionRequired`]. Step 2 can fail too:
//! `q -> q, q => p | ~p` has no such proof although `p -> p, q => p | ~p` does.

use crate::calculus::{check_proof, Proof, RuleId};
use crate::formula::Formula;
use crate::prover::{prove_contraction_cut_free, prove_contraction_cut_free_deferring};
use crate::sequent::{Sequent, Side};

use super::lift::{AtIntro, Lift};
use super::{arrange, eliminate_contraction, mcut_to_acut, TransformError};

/// The formula `A` of `A -> A`: the first variable of the sequent, or `p` if it has none.
pub fn witness_formula(s: &Sequent) -> Formula {
    s.vars_in_order()
        .into_iter()
        .next()
        .map_or_else(|| Formula::atom("p"), Formula::Atom)
}

fn identity_implication(f: &Formula) -> bool {
    matches!(f, Formula::Impl(a, b) if a == b)
}

/// From a contraction-free proof of `A -> A, G => D`, a proof of the same sequent with
/// neither contraction nor cut.
///
/// The input certifies provability; the output is reconstructed by search. A proof that
/// leaves `A -> A` untouched is preferred, and `A -> A` is decomposed only when nothing
/// else works.
pub fn part_one(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    if !p.is_contraction_free() {
        return Err(TransformError::WrongShape("input uses contraction".into()));
    }
    let goal = &p.conclusion;
    let Some(imp) = goal.ante.first().filter(|f| identity_implication(f)) else {
        return Err(TransformError::WrongShape(
            "antecedent must start with an implication A -> A".into(),
        ));
    };
    let rest = Sequent::new(goal.ante[1..].to_vec(), goal.succ.clone());
    if let Some(q) = prove_contraction_cut_free(&rest)? {
        return Ok(Proof::unary(RuleId::WL, imp.clone(), q));
    }
    match prove_contraction_cut_free_deferring(goal, Some(imp))? {
        Some(q) => Ok(arrange(q, goal)),
        None => Err(TransformError::ContractionRequired(goal.clone())),
    }
}

/// From a contraction+cut-free proof of `A -> A, G => D`, one of `G => D`.
///
/// The leading `A -> A` is traced upward. Where it was weakened in, the weakening is
/// dropped. Where it was introduced by `->L` from `G' => D', A` and `A, G' => D'`, one of
/// those side occurrences of `A` must itself trace back to weakenings only, and that
/// premise is kept.
pub fn part_two(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    if p.uses(RuleId::CL) || p.uses(RuleId::CR) || !p.is_cut_free() {
        return Err(TransformError::WrongShape(
            "input uses contraction or cut".into(),
        ));
    }
    if !p.conclusion.ante.first().is_some_and(identity_implication) {
        return Err(TransformError::WrongShape(
            "antecedent must start with an implication A -> A".into(),
        ));
    }
    let lift = Lift {
        side: Side::Ante,
        left: Vec::new(),
        right: Vec::new(),
        at_intro: AtIntro::DropIdentityImplication,
    };
    let target = lift.target(&p.conclusion, &[0]);
    lift.run(p, &[0]).map_err(|e| match e {
        TransformError::NotRemovable(_) => TransformError::ContractionRequired(target),
        e => e,
    })
}

/// Removes the formula occurrence at `(side, position)` when every ancestor of it was
/// introduced by weakening.
pub fn strip_weakened_occurrence(
    p: &Proof,
    side: Side,
    position: usize,
) -> Result<Proof, TransformError> {
    check_proof(p)?;
    if position >= p.conclusion.side(side).len() {
        return Err(TransformError::WrongShape(format!(
            "no formula at position {position}"
        )));
    }
    let lift = Lift {
        side,
        left: Vec::new(),
        right: Vec::new(),
        at_intro: AtIntro::Fail,
    };
    lift.run(p, &[position])
}

/// A proof of the same end-sequent with neither contraction nor cut.
pub fn eliminate_cut_and_contraction(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    let contraction_free = eliminate_contraction(&mcut_to_acut(p)?)?;
    let a = witness_formula(&p.conclusion);
    let imp = Formula::implies(a.clone(), a);
    let widened = Proof::unary(RuleId::WL, imp, contraction_free);
    let one = part_one(&widened)?;
    let two = part_two(&one)?;
    Ok(arrange(two, &p.conclusion))
}
