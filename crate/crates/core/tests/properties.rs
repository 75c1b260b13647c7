use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plk_core::abss::{generate_random_abss, AbssParams, FiniteAbss};
use plk_core::proof_json::{proof_from_json, proof_to_json};
use plk_core::random::{self, Shape};
use plk_core::transform::{
    eliminate_contraction, invert, mcut_to_acut, reduce_cut_degree, InvertItem,
};
use plk_core::{check_proof, prove_cutfree, weaken_to, Formula, Proof, RuleId, Sequent};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just("p"), Just("q"), Just("r"), Just("x1")].prop_map(Formula::atom);
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::conj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::disj(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn sequent() -> impl Strategy<Value = Sequent> {
    (
        prop::collection::vec(formula(), 0..4),
        prop::collection::vec(formula(), 0..4),
    )
        .prop_map(|(a, s)| Sequent::new(a, s))
}

fn shape() -> Shape {
    Shape {
        max_comp: 4,
        max_side: 2,
        ..Shape::default()
    }
}

fn cut_proof(seed: u64) -> Proof {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random::provable_sequent(&mut rng, &shape());
    random::proof_with_cuts(&mut rng, &s, &shape(), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn formula_round_trip(f in formula()) {
        prop_assert_eq!(f.to_string().parse::<Formula>().unwrap(), f);
    }

    #[test]
    fn sequent_round_trip(s in sequent()) {
        prop_assert_eq!(s.to_string().parse::<Sequent>().unwrap(), s);
    }

    #[test]
    fn weakening_reaches_any_supersequent(seed: u64, extra_a in prop::collection::vec(formula(), 0..3),
                                          extra_s in prop::collection::vec(formula(), 0..3), rot: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::provable_sequent(&mut rng, &shape());
        let p = prove_cutfree(&s).unwrap();
        let mut ante: Vec<Formula> = s.ante.iter().cloned().chain(extra_a).collect();
        let mut succ: Vec<Formula> = extra_s.into_iter().chain(s.succ.iter().cloned()).collect();
        if !ante.is_empty() {
            let n = rot % ante.len();
            ante.rotate_left(n);
        }
        if !succ.is_empty() {
            let n = rot % succ.len();
            succ.rotate_right(n);
        }
        let target = Sequent::new(ante, succ);
        let q = weaken_to(p, &target).unwrap();
        check_proof(&q).unwrap();
        prop_assert_eq!(q.conclusion, target);
    }

    #[test]
    fn proof_json_round_trip(seed: u64) {
        let p = cut_proof(seed);
        prop_assert_eq!(proof_from_json(&proof_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn contraction_elimination_keeps_the_conclusion(seed: u64) {
        let p = cut_proof(seed);
        let q = eliminate_contraction(&p).unwrap();
        check_proof(&q).unwrap();
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(q.is_contraction_free());
    }

    #[test]
    fn degree_reduction_lowers_the_degree(seed: u64) {
        let p = cut_proof(seed);
        prop_assume!(p.degree() > 0);
        let q = reduce_cut_degree(&p).unwrap();
        check_proof(&q).unwrap();
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(q.degree() < p.degree());
        prop_assert_eq!(q.uses(RuleId::CL) || q.uses(RuleId::CR), p.uses(RuleId::CL) || p.uses(RuleId::CR));
    }

    #[test]
    fn mcut_conversion_leaves_no_mcut(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::proof_with_mcut(&mut rng, &shape());
        let q = mcut_to_acut(&p).unwrap();
        check_proof(&q).unwrap();
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(!q.uses(RuleId::CutMultiplicative));
        prop_assert!(q.degree() <= p.degree());
    }

    #[test]
    fn inversion_yields_proofs_of_the_premises(seed: u64) {
        let p = cut_proof(seed);
        let s = &p.conclusion;
        for item in InvertItem::all() {
            for (pos, f) in s.side(item.side()).iter().enumerate() {
                if !item.applies_to(f) {
                    continue;
                }
                let parts = invert(item, &p, pos).unwrap();
                prop_assert_eq!(parts.len(), item.components());
                for q in &parts {
                    check_proof(q).unwrap();
                    prop_assert!(q.degree() <= p.degree());
                    prop_assert_eq!(q.conclusion.len(), s.len() + usize::from(matches!(item.number(), 3 | 6 | 8)));
                }
            }
        }
    }

    #[test]
    fn abss_json_round_trip(seed: u64) {
        let a = generate_random_abss(seed, &AbssParams::default());
        let b = FiniteAbss::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(b.closure(None).unwrap(), a.closure(None).unwrap());
        prop_assert_eq!(b.rules(), a.rules());
    }

    #[test]
    fn removing_a_rule_never_grows_the_closure(seed: u64) {
        let a = generate_random_abss(seed, &AbssParams::default());
        let all = a.closure(None).unwrap();
        for r in a.rules() {
            prop_assert!(a.closure(Some(&r.name)).unwrap().is_subset(&all));
        }
    }
}
