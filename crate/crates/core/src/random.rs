//! Seeded generators for formulas, sequents, proofs and rule instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{Active, Proof, RuleId, RuleInstance};
use crate::formula::Formula;
use crate::prover::{decide, prove_cutfree};
use crate::sequent::Sequent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub vars: Vec<String>,
    /// Maximum connective count of each generated formula.
    pub max_comp: usize,
    /// Maximum number of formulas per side.
    pub max_side: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            vars: vec!["p".into(), "q".into(), "r".into()],
            max_comp: 3,
            max_side: 3,
        }
    }
}

/// A formula with exactly `comp` connectives (binary connectives count two).
pub fn formula_of_comp<R: Rng>(rng: &mut R, vars: &[String], comp: usize) -> Formula {
    if comp == 0 {
        return Formula::atom(vars.choose(rng).expect("at least one variable"));
    }
    // A binary node needs two more connectives than its children together.
    if comp == 1 || rng.gen_bool(0.3) {
        return Formula::neg(formula_of_comp(rng, vars, comp - 1));
    }
    let rest = comp - 2;
    let k = rng.gen_range(0..=rest);
    let (a, b) = (
        formula_of_comp(rng, vars, k),
        formula_of_comp(rng, vars, rest - k),
    );
    match rng.gen_range(0..3) {
        0 => Formula::conj(a, b),
        1 => Formula::disj(a, b),
        _ => Formula::implies(a, b),
    }
}

pub fn formula<R: Rng>(rng: &mut R, shape: &Shape) -> Formula {
    let c = rng.gen_range(0..=shape.max_comp);
    formula_of_comp(rng, &shape.vars, c)
}

fn side<R: Rng>(rng: &mut R, shape: &Shape, min: usize) -> Vec<Formula> {
    let n = rng.gen_range(min.min(shape.max_side)..=shape.max_side);
    (0..n).map(|_| formula(rng, shape)).collect()
}

pub fn sequent<R: Rng>(rng: &mut R, shape: &Shape) -> Sequent {
    Sequent::new(side(rng, shape, 0), side(rng, shape, 0))
}

/// A PLK-provable sequent, found by rejection sampling.
pub fn provable_sequent<R: Rng>(rng: &mut R, shape: &Shape) -> Sequent {
    loop {
        let s = sequent(rng, shape);
        if decide(&s).unwrap_or(false) {
            return s;
        }
    }
}

/// A proof of the provable `s` containing up to `depth` levels of additive cuts on random
/// formulas. Cut-free subproofs come from the complete prover and may contract.
pub fn proof_with_cuts<R: Rng>(rng: &mut R, s: &Sequent, shape: &Shape, depth: usize) -> Proof {
    if depth > 0 {
        for _ in 0..8 {
            let a = formula(rng, shape);
            let (l, r) = (s.with_back(a.clone()), s.with_front(a.clone()));
            if decide(&l).unwrap_or(false) && decide(&r).unwrap_or(false) {
                let lp = proof_with_cuts(rng, &l, shape, depth - 1);
                let rp = proof_with_cuts(rng, &r, shape, depth - 1);
                return Proof::binary(RuleId::CutAdditive, Active::Cut(a), lp, rp);
            }
        }
    }
    prove_cutfree(s).expect("provable sequent")
}

/// A proof ending in a multiplicative cut, splitting a random provable sequent's contexts.
/// Inner subproofs are cut-free.
pub fn proof_with_mcut<R: Rng>(rng: &mut R, shape: &Shape) -> Proof {
    loop {
        let g1 = side(rng, shape, 0);
        let g2 = side(rng, shape, 0);
        let d1 = side(rng, shape, 0);
        let d2 = side(rng, shape, 0);
        let a = formula(rng, shape);
        let mut ls = Sequent::new(g1, d1);
        ls.succ.push(a.clone());
        let mut rs = Sequent::new(g2, d2);
        rs.ante.insert(0, a.clone());
        if decide(&ls).unwrap_or(false) && decide(&rs).unwrap_or(false) {
            let lp = prove_cutfree(&ls).expect("provable");
            let rp = prove_cutfree(&rs).expect("provable");
            return Proof::binary(RuleId::CutMultiplicative, Active::Cut(a), lp, rp);
        }
    }
}

/// A random instance of `rule` over a random context. Cut formulas are non-atomic.
pub fn rule_instance<R: Rng>(rng: &mut R, rule: RuleId, shape: &Shape) -> RuleInstance {
    let ctx = sequent(rng, shape);
    let g = ctx.ante.clone();
    let d = ctx.succ.clone();
    let f = |rng: &mut R| formula(rng, shape);
    let front = |x: Formula, rest: &[Formula]| {
        let mut v = vec![x];
        v.extend_from_slice(rest);
        v
    };
    let back = |rest: &[Formula], x: Formula| {
        let mut v = rest.to_vec();
        v.push(x);
        v
    };
    let (active, premises) = match rule {
        RuleId::Axiom => {
            let a = Formula::atom(shape.vars.choose(rng).expect("variable"));
            (Active::Principal(a), vec![])
        }
        RuleId::WL | RuleId::WR => (Active::Principal(f(rng)), vec![ctx.clone()]),
        RuleId::CL => {
            let a = f(rng);
            (
                Active::Principal(a.clone()),
                vec![Sequent::new(front(a.clone(), &front(a, &g)), d)],
            )
        }
        RuleId::CR => {
            let a = f(rng);
            (
                Active::Principal(a.clone()),
                vec![Sequent::new(g, back(&back(&d, a.clone()), a))],
            )
        }
        RuleId::EL | RuleId::ER => {
            let mut s = ctx.clone();
            let xs = s.side_mut(if rule == RuleId::EL {
                crate::Side::Ante
            } else {
                crate::Side::Succ
            });
            while xs.len() < 2 {
                xs.push(f(rng));
            }
            let i = rng.gen_range(0..xs.len() - 1);
            (Active::Swap(i), vec![s])
        }
        RuleId::NegL => {
            let a = f(rng);
            (
                Active::Principal(Formula::neg(a.clone())),
                vec![Sequent::new(g, back(&d, a))],
            )
        }
        RuleId::NegR => {
            let a = f(rng);
            (
                Active::Principal(Formula::neg(a.clone())),
                vec![Sequent::new(front(a, &g), d)],
            )
        }
        RuleId::ConjLLeft | RuleId::ConjLRight => {
            let (a, b) = (f(rng), f(rng));
            let side = if rule == RuleId::ConjLLeft {
                a.clone()
            } else {
                b.clone()
            };
            (
                Active::Principal(Formula::conj(a, b)),
                vec![Sequent::new(front(side, &g), d)],
            )
        }
        RuleId::ConjR => {
            let (a, b) = (f(rng), f(rng));
            (
                Active::Principal(Formula::conj(a.clone(), b.clone())),
                vec![
                    Sequent::new(g.clone(), back(&d, a)),
                    Sequent::new(g, back(&d, b)),
                ],
            )
        }
        RuleId::DisjL => {
            let (a, b) = (f(rng), f(rng));
            (
                Active::Principal(Formula::disj(a.clone(), b.clone())),
                vec![
                    Sequent::new(front(a, &g), d.clone()),
                    Sequent::new(front(b, &g), d),
                ],
            )
        }
        RuleId::DisjRLeft | RuleId::DisjRRight => {
            let (a, b) = (f(rng), f(rng));
            let side = if rule == RuleId::DisjRLeft {
                a.clone()
            } else {
                b.clone()
            };
            (
                Active::Principal(Formula::disj(a, b)),
                vec![Sequent::new(g, back(&d, side))],
            )
        }
        RuleId::ImplL => {
            let (a, b) = (f(rng), f(rng));
            (
                Active::Principal(Formula::implies(a.clone(), b.clone())),
                vec![
                    Sequent::new(g.clone(), back(&d, a)),
                    Sequent::new(front(b, &g), d),
                ],
            )
        }
        RuleId::ImplR => {
            let (a, b) = (f(rng), f(rng));
            (
                Active::Principal(Formula::implies(a.clone(), b.clone())),
                vec![Sequent::new(front(a, &g), back(&d, b))],
            )
        }
        RuleId::CutAdditive => {
            let c = rng.gen_range(1..=shape.max_comp.max(1));
            let a = formula_of_comp(rng, &shape.vars, c);
            (
                Active::Cut(a.clone()),
                vec![
                    Sequent::new(g.clone(), back(&d, a.clone())),
                    Sequent::new(front(a, &g), d),
                ],
            )
        }
        RuleId::CutMultiplicative => {
            let c = rng.gen_range(1..=shape.max_comp.max(1));
            let a = formula_of_comp(rng, &shape.vars, c);
            let other = sequent(rng, shape);
            (
                Active::Cut(a.clone()),
                vec![
                    Sequent::new(g, back(&d, a.clone())),
                    Sequent::new(front(a, &other.ante), other.succ),
                ],
            )
        }
    };
    RuleInstance::new(rule, active, premises).expect("generated instance matches its schema")
}
