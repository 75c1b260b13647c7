mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plk_core::abss::{generate_random_abss, AbssParams};
use plk_core::random::{self, Shape};
use plk_core::{certify_unprovable, check_proof, decide, prove_cutfree, verify_certificate};

use common::{naive_closure, sequent_class, valid};

#[test]
fn decide_agrees_with_truth_tables_on_random_sequents() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shape = Shape {
        max_comp: 6,
        max_side: 4,
        ..Shape::default()
    };
    for _ in 0..3000 {
        let s = random::sequent(&mut rng, &shape);
        assert_eq!(decide(&s).unwrap(), valid(&s), "{s}");
    }
}

#[test]
fn proofs_and_certificates_on_a_small_class() {
    let class = sequent_class(&["p", "q"], 2, 1, 2);
    assert_eq!(class.len(), 8_673);
    let mut provable = 0;
    for s in &class {
        if valid(s) {
            provable += 1;
            let p = prove_cutfree(s).unwrap();
            check_proof(&p).unwrap();
            assert_eq!(&p.conclusion, s);
            assert!(p.is_cut_free());
        } else {
            let cert = certify_unprovable(s).unwrap();
            assert!(verify_certificate(s, &cert), "{s}");
        }
    }
    assert_eq!(provable, 6_398);
}

#[test]
fn closure_agrees_with_naive_iteration() {
    let params = AbssParams {
        tokens: 20,
        rules: 6,
        instances_per_rule: 6,
        max_premises: 3,
        ..AbssParams::default()
    };
    for seed in 0..300 {
        let a = generate_random_abss(seed, &params);
        assert_eq!(
            a.closure(None).unwrap(),
            naive_closure(&a, None),
            "seed {seed}"
        );
        for r in a.rules() {
            assert_eq!(
                a.closure(Some(&r.name)).unwrap(),
                naive_closure(&a, Some(&r.name)),
                "seed {seed}, without {}",
                r.name
            );
        }
    }
}
