//! Multiplicative cuts rewritten as additive ones.

use crate::calculus::{check_proof, Active, Proof, RuleId};
use crate::sequent::Sequent;

use super::{arrange, TransformError};

/// Replaces every multiplicative cut by an additive cut over padded premises.
pub fn mcut_to_acut(p: &Proof) -> Result<Proof, TransformError> {
    check_proof(p)?;
    Ok(convert(p))
}

fn convert(p: &Proof) -> Proof {
    let premises: Vec<Proof> = p.premises.iter().map(convert).collect();
    if p.rule != RuleId::CutMultiplicative {
        return Proof {
            premises,
            ..p.clone()
        };
    }
    let [l, r]: [Proof; 2] = premises.try_into().expect("cut is binary");
    additive_cut(p.cut_formula().expect("cut formula").clone(), l, r)
}

/// From `G => D, A` and `A, G' => D'`, an additive cut concluding `G, G' => D, D'`.
pub(crate) fn additive_cut(a: crate::formula::Formula, l: Proof, r: Proof) -> Proof {
    let (lc, rc) = (&l.conclusion, &r.conclusion);
    let mut ante = lc.ante.clone();
    ante.extend_from_slice(&rc.ante[1..]);
    let mut succ = lc.succ[..lc.succ.len() - 1].to_vec();
    succ.extend_from_slice(&rc.succ);
    let concl = Sequent::new(ante, succ);
    let l = arrange(l, &concl.with_back(a.clone()));
    let r = arrange(r, &concl.with_front(a.clone()));
    Proof::binary(RuleId::CutAdditive, Active::Cut(a), l, r)
}
