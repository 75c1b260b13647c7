//! Lowering the complexity of cut formulas.

use crate::calculus::{check_proof, Active, Proof, RuleId};
use crate::formula::Formula;
use crate::sequent::Side;

use super::invert::{invert_component, InvertItem};
use super::mcut::additive_cut;
use super::{highest_leftmost, TransformError};

/// Returns a proof of the same sequent whose largest cut-formula complexity is strictly
/// smaller. Every cut of maximal complexity is rewritten, highest leftmost first, into
/// cuts on the immediate subformulas of its cut formula.
pub fn reduce_cut_degree(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    let d = p.degree();
    if d == 0 {
        return Err(TransformError::DegreeZero);
    }
    let mut cur = p.clone();
    let is_max = |n: &Proof| n.cut_formula().is_some_and(|f| f.comp() == d);
    while let Some(path) = highest_leftmost(&cur, &is_max) {
        let node = cur.subproof_mut(&path).expect("path from search");
        let old = std::mem::replace(node, Proof::axiom(Formula::atom("p")));
        *node = rewrite(old)?;
    }
    debug_assert!(cur.degree() < d);
    Ok(cur)
}

/// Applies [`reduce_cut_degree`] until every cut is atomic.
pub fn eliminate_nonatomic_cuts(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    let mut cur = p.clone();
    while cur.degree() > 0 {
        cur = reduce_cut_degree(&cur)?;
    }
    Ok(cur)
}

fn inv(n: u8, component: usize, p: &Proof, position: usize) -> Result<Proof, TransformError> {
    invert_component(
        InvertItem::new(n).expect("valid item"),
        component,
        p,
        position,
    )
}

fn cut(a: Formula, l: Proof, r: Proof) -> Proof {
    Proof::binary(RuleId::CutAdditive, Active::Cut(a), l, r)
}

/// Rewrites one cut whose premises contain only cuts of lower complexity.
fn rewrite(node: Proof) -> Result<Proof, TransformError> {
    let a = node.cut_formula().expect("cut node").clone();
    let node = if node.rule == RuleId::CutMultiplicative {
        let [l, r]: [Proof; 2] = node.premises.try_into().expect("binary");
        additive_cut(a.clone(), l, r)
    } else {
        node
    };
    let [l, r]: [Proof; 2] = node.premises.try_into().expect("binary");
    let last = l.conclusion.succ.len() - 1;
    let out = match &a {
        Formula::Atom(_) => unreachable!("only non-atomic cuts are rewritten"),
        Formula::Neg(b) => {
            let l1 = inv(1, 0, &l, last)?;
            let r1 = inv(2, 0, &r, 0)?;
            cut((**b).clone(), r1, l1)
        }
        Formula::Conj(b, c) => {
            let (b, c) = ((**b).clone(), (**c).clone());
            let lb = inv(4, 0, &l, last)?;
            let lc = inv(4, 1, &l, last)?;
            let rbc = inv(3, 0, &r, 0)?;
            let inner = cut(b, Proof::unary(RuleId::WL, c.clone(), lb), rbc);
            cut(c, lc, inner)
        }
        Formula::Disj(b, c) => {
            let (b, c) = ((**b).clone(), (**c).clone());
            let lbc = inv(6, 0, &l, last)?;
            let rb = inv(5, 0, &r, 0)?;
            let rc = inv(5, 1, &r, 0)?;
            let inner = cut(c, lbc, Proof::unary(RuleId::WR, b.clone(), rc));
            cut(b, inner, rb)
        }
        Formula::Impl(b, c) => {
            let (b, c) = ((**b).clone(), (**c).clone());
            let lbc = inv(8, 0, &l, last)?;
            let rb = inv(7, 0, &r, 0)?;
            let rc = inv(7, 1, &r, 0)?;
            let rc = Proof::swap(Side::Ante, 0, Proof::unary(RuleId::WL, b.clone(), rc));
            let inner = cut(c, lbc, rc);
            cut(b, rb, inner)
        }
    };
    debug_assert_eq!(out.conclusion, node.conclusion);
    Ok(out)
}
