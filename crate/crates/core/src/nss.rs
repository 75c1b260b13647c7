//! Witness functions for PLK viewed as a normal sequent structure.
//!
//! A valuation `v` of sequents into the naturals witnesses a rule `T` when its least value
//! is taken only by all-atomic sequents and it respects no instance of `T`; an instance is
//! respected when no premise is valued above the conclusion. The universal clause is
//! checked on a finite sample, never proved.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{check_instance, check_proof, weaken_to, Proof, RuleId, RuleInstance};
use crate::formula::Formula;
use crate::prover::{
    decide, decompose, leftmost_compound, prove_cutfree, shared_atom, ProverError,
};
use crate::random::{rule_instance, Shape};
use crate::sequent::Sequent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NssError {
    #[error("the instance set is empty")]
    EmptyInstanceSet,
    #[error("instance {index} is not a rule instance: {reason}")]
    InvalidInstance { index: usize, reason: String },
    #[error("`{0}` is not provable")]
    NotProvable(Sequent),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

pub fn seqcomp(s: &Sequent) -> u64 {
    s.seqcomp() as u64
}

/// `v` respects the instance: no premise is valued above the conclusion.
pub fn respects(v: &dyn Fn(&Sequent) -> u64, inst: &RuleInstance) -> bool {
    let c = v(&inst.conclusion);
    inst.premises.iter().all(|p| v(p) <= c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NssViolation {
    /// A sequent at the least level has a compound formula.
    CompoundAtLeast(String),
    /// The instance at this index of the supplied set is respected.
    Respected(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub is_witness: bool,
    pub n0: u64,
    /// The least-level clause was only checked on the sample.
    pub sampled: bool,
    pub violations: Vec<NssViolation>,
}

/// Checks `v` against the witness clauses for `T`, given by a finite set of its instances.
/// The least level is computed over `domain` together with every sequent in the instances.
pub fn check_nss_witness(
    v: &dyn Fn(&Sequent) -> u64,
    t_instances: &[RuleInstance],
    domain: &[Sequent],
) -> Result<WitnessCheck, NssError> {
    if t_instances.is_empty() {
        return Err(NssError::EmptyInstanceSet);
    }
    for (index, inst) in t_instances.iter().enumerate() {
        check_instance(inst).map_err(|e| NssError::InvalidInstance {
            index,
            reason: e.to_string(),
        })?;
    }
    let all: Vec<&Sequent> = domain
        .iter()
        .chain(
            t_instances
                .iter()
                .flat_map(|i| i.premises.iter().chain([&i.conclusion])),
        )
        .collect();
    let n0 = all.iter().map(|s| v(s)).min().expect("nonempty");
    let mut violations = Vec::new();
    for s in &all {
        if v(s) == n0 && !s.is_atomic() {
            violations.push(NssViolation::CompoundAtLeast(s.to_string()));
            break;
        }
    }
    for (i, inst) in t_instances.iter().enumerate() {
        if respects(v, inst) {
            violations.push(NssViolation::Respected(i));
        }
    }
    Ok(WitnessCheck {
        is_witness: violations.is_empty(),
        n0,
        sampled: true,
        violations,
    })
}

/// One step down the value chain.
#[derive(Debug, Clone, Serialize)]
pub struct ChainLink {
    pub sequent: String,
    pub value: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremItem {
    pub sequent: String,
    /// Provable sequents of strictly decreasing value, ending at the least level.
    pub chain: Vec<ChainLink>,
    /// Every link above the least level has a provable successor of smaller value.
    pub condition1: bool,
    /// Every link has a checked proof avoiding `T`.
    pub condition2: bool,
    /// The atomic sequent at the bottom has a proof from a shared variable by weakening
    /// and exchange only.
    pub base_case: bool,
    #[serde(skip)]
    pub proof: Option<Proof>,
}

impl TheoremItem {
    pub fn holds(&self) -> bool {
        self.condition1 && self.condition2 && self.base_case
    }
}

fn t_free(p: &Proof, t: &dyn Fn(&RuleInstance) -> bool) -> bool {
    let mut ok = true;
    p.visit(&mut |n| {
        if n.rule != RuleId::Axiom && t(&n.instance()) {
            ok = false;
        }
    });
    ok
}

/// The additive or multiplicative cut on a compound formula.
pub fn is_nonatomic_cut(inst: &RuleInstance) -> bool {
    inst.cut_formula().is_some_and(|f| !f.is_atomic())
}

/// Walks each sampled provable sequent down to the all-atomic level along provable premises
/// of its leftmost compound formula (all premises of a decomposition are provable when the
/// conclusion is), checking the two elimination conditions for `v = seqcomp` and the given
/// `T` at every link.
pub fn check_nss_theorem_i(
    sample: &[Sequent],
    t: &dyn Fn(&RuleInstance) -> bool,
) -> Result<Vec<TheoremItem>, NssError> {
    sample
        .iter()
        .map(|s| {
            if !decide(s)? {
                return Err(NssError::NotProvable(s.clone()));
            }
            let mut chain = vec![s.clone()];
            let mut condition1 = true;
            while let Some((side, i)) = leftmost_compound(chain.last().expect("nonempty")) {
                let cur = chain.last().expect("nonempty");
                let next = decompose(cur, side, i)
                    .into_iter()
                    .find(|p| decide(p).unwrap_or(false));
                match next {
                    Some(n) if seqcomp(&n) < seqcomp(cur) => chain.push(n),
                    _ => {
                        condition1 = false;
                        break;
                    }
                }
            }
            let mut condition2 = true;
            let mut proof = None;
            for (k, link) in chain.iter().enumerate() {
                let p = prove_cutfree(link)?;
                condition2 &= check_proof(&p).is_ok() && t_free(&p, t) && p.conclusion == *link;
                if k == 0 {
                    proof = Some(p);
                }
            }
            let bottom = chain.last().expect("nonempty");
            let base_case = bottom.is_atomic()
                && shared_atom(bottom).is_some_and(|a| {
                    weaken_to(Proof::axiom(Formula::Atom(a)), bottom)
                        .is_ok_and(|p| check_proof(&p).is_ok() && t_free(&p, t))
                });
            Ok(TheoremItem {
                sequent: s.to_string(),
                chain: chain
                    .iter()
                    .map(|c| ChainLink {
                        sequent: c.to_string(),
                        value: seqcomp(c),
                    })
                    .collect(),
                condition1,
                condition2,
                base_case,
                proof,
            })
        })
        .collect()
}

fn pool_shape() -> Shape {
    Shape {
        max_comp: 3,
        max_side: 2,
        ..Shape::default()
    }
}

/// `n` additive cuts on compound formulas over random contexts.
pub fn nonatomic_cut_pool(seed: u64, n: usize) -> Vec<RuleInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = pool_shape();
    (0..n)
        .map(|_| rule_instance(&mut rng, RuleId::CutAdditive, &shape))
        .collect()
}

/// Rules other than cut and contraction.
pub const RESPECTED_RULES: [RuleId; 14] = [
    RuleId::WL,
    RuleId::WR,
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
];

/// `n` instances of weakening, exchange and logical rules, cycling through the rules.
pub fn respected_pool(seed: u64, n: usize) -> Vec<RuleInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = pool_shape();
    (0..n)
        .map(|i| rule_instance(&mut rng, RESPECTED_RULES[i % RESPECTED_RULES.len()], &shape))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub cut_instances: usize,
    pub cut_not_respected: usize,
    /// Cut instances whose premise exceeds the conclusion by exactly the cut formula's comp.
    pub cut_exact_excess: usize,
    pub other_instances: usize,
    pub other_respected: usize,
    pub contraction_instances: usize,
    /// Contraction premises valued at least the conclusion, strictly iff the formula is compound.
    pub contraction_as_expected: usize,
    pub witness: WitnessCheck,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.cut_not_respected == self.cut_instances
            && self.cut_exact_excess == self.cut_instances
            && self.other_respected == self.other_instances
            && self.contraction_as_expected == self.contraction_instances
            && self.witness.is_witness
    }
}

/// seqcomp against pools of `n` instances each.
pub fn run_demo(seed: u64, n: usize) -> Result<DemoReport, NssError> {
    let cuts = nonatomic_cut_pool(seed, n);
    let others = respected_pool(seed.wrapping_add(1), n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let shape = pool_shape();
    let contractions: Vec<RuleInstance> = (0..n / 10 + 1)
        .map(|i| {
            rule_instance(
                &mut rng,
                if i % 2 == 0 { RuleId::CL } else { RuleId::CR },
                &shape,
            )
        })
        .collect();
    let v = |s: &Sequent| seqcomp(s);
    let cut_exact_excess = cuts
        .iter()
        .filter(|c| {
            let k = c.cut_formula().expect("cut").comp() as u64;
            c.premises
                .iter()
                .all(|p| seqcomp(p) == seqcomp(&c.conclusion) + k)
        })
        .count();
    let contraction_as_expected = contractions
        .iter()
        .filter(|c| {
            let crate::calculus::Active::Principal(f) = &c.active else {
                return false;
            };
            let (p, q) = (seqcomp(&c.premises[0]), seqcomp(&c.conclusion));
            p >= q && ((p > q) == !f.is_atomic())
        })
        .count();
    let atomic_domain = vec![Sequent::new(vec![], vec![])];
    Ok(DemoReport {
        cut_instances: cuts.len(),
        cut_not_respected: cuts.iter().filter(|c| !respects(&v, c)).count(),
        cut_exact_excess,
        other_instances: others.len(),
        other_respected: others.iter().filter(|c| respects(&v, c)).count(),
        contraction_instances: contractions.len(),
        contraction_as_expected,
        witness: check_nss_witness(&v, &cuts, &atomic_domain)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Active;

    fn s(x: &str) -> Sequent {
        x.parse().unwrap()
    }

    #[test]
    fn atomic_cut_is_respected() {
        let mut pool = nonatomic_cut_pool(1, 20);
        let v = |x: &Sequent| seqcomp(x);
        assert!(check_nss_witness(&v, &pool, &[]).unwrap().is_witness);
        pool.push(
            RuleInstance::new(
                RuleId::CutAdditive,
                Active::Cut(Formula::atom("p")),
                vec![s("q => p"), s("p, q => ")],
            )
            .unwrap(),
        );
        let r = check_nss_witness(&v, &pool, &[]).unwrap();
        assert!(!r.is_witness);
        assert_eq!(r.violations, vec![NssViolation::Respected(20)]);
    }

    #[test]
    fn constant_valuation_is_not_a_witness() {
        let pool = nonatomic_cut_pool(2, 5);
        let r = check_nss_witness(&|_| 0, &pool, &[]).unwrap();
        assert!(!r.is_witness);
        assert_eq!(
            check_nss_witness(&|_| 0, &[], &[]),
            Err(NssError::EmptyInstanceSet)
        );
    }

    #[test]
    fn seqcomp_chain() {
        let items =
            check_nss_theorem_i(&[s("p & q => q & p"), s("p, q => p")], &is_nonatomic_cut).unwrap();
        for it in &items {
            assert!(it.holds(), "{it:?}");
            assert_eq!(it.chain.last().unwrap().value, 0);
        }
        assert_eq!(items[1].chain.len(), 1);
        assert!(matches!(
            check_nss_theorem_i(&[s("p => q")], &is_nonatomic_cut),
            Err(NssError::NotProvable(_))
        ));
    }

    #[test]
    fn small_demo() {
        assert!(run_demo(0, 500).unwrap().passed());
    }
}
