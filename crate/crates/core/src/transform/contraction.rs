//! Replacing contractions by cuts.

use crate::calculus::{check_proof, Active, Proof, RuleId};
use crate::prover::identity_proof;

use super::{arrange, highest_leftmost, TransformError};

/// Removes every contraction, working on the highest leftmost one first.
///
/// A left contraction on `A` over a subproof of `A, A, G => D` becomes a cut on `A` whose
/// left premise `A, G => D, A` is an identity proof widened by weakening and exchange.
/// Right contractions are symmetric. Each new cut is on a contracted formula, and no new
/// contraction is introduced.
pub fn eliminate_contraction(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    let mut cur = p.clone();
    while let Some(path) = highest_leftmost(&cur, &|n| n.rule.is_contraction()) {
        let node = cur.subproof_mut(&path).expect("path from search");
        let replaced = replace(std::mem::replace(
            node,
            Proof::axiom(crate::formula::Formula::atom("p")),
        ));
        *node = replaced;
    }
    Ok(cur)
}

fn replace(node: Proof) -> Proof {
    let Active::Principal(a) = node.active.clone() else {
        unreachable!("contractions carry their formula")
    };
    let concl = node.conclusion.clone();
    let sub = node.premises.into_iter().next().expect("unary");
    let (left, right) = match node.rule {
        RuleId::CL => (
            arrange(identity_proof(&a), &concl.with_back(a.clone())),
            sub,
        ),
        RuleId::CR => (
            sub,
            arrange(identity_proof(&a), &concl.with_front(a.clone())),
        ),
        _ => unreachable!("only contractions are replaced"),
    };
    Proof::binary(RuleId::CutAdditive, Active::Cut(a), left, right)
}
