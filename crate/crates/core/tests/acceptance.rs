//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use plk_core::abss::{run_converse_trials, run_theorem_trials};
use plk_core::nonelim::{run_plk0_suite, run_witness_suite, DEFAULT_NODE_BUDGET};
use plk_core::nss::run_demo;
use plk_core::random::{
    formula, formula_of_comp, proof_with_cuts, proof_with_mcut, sequent, Shape,
};
use plk_core::transform::{
    eliminate_contraction, eliminate_cut_and_contraction, invert, mcut_to_acut, reduce_cut_degree,
    InvertItem,
};
use plk_core::{
    check_proof, decide, identity_proof, prove_contraction_cut_free, prove_cutfree, Formula, Proof,
    RuleId, Sequent, Side, TransformError,
};

const SEED: u64 = 7;
const CLASS_1_SIZE: usize = 3_394_000;
const CLASS_3_SIZE: usize = 21_413;
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(600);
const SEARCH_ITEM_LIMIT: Duration = Duration::from_secs(60);
const IDENTITY_TRIALS: usize = 1000;
const IDENTITY_MAX_SIZE: usize = 12;
const INVERT_TRIALS: usize = 200;
const DEGREE_TRIALS: usize = 200;
const ABSS_TRIALS: u64 = 1000;
const NSS_POOL: usize = 10_000;
const MCUT_TRIALS: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn no_contraction_or_cut(p: &Proof) -> bool {
    !p.uses(RuleId::CL) && !p.uses(RuleId::CR) && p.is_cut_free()
}

fn oracle_equivalence(class: &[Sequent]) -> (Outcome, Vec<Sequent>) {
    let t = Instant::now();
    let results: Vec<(bool, bool)> = class
        .par_iter()
        .map(|s| (decide(s).expect("small sequent"), common::valid(s)))
        .collect();
    let mismatches: Vec<&Sequent> = class
        .iter()
        .zip(&results)
        .filter(|(_, (d, v))| d != v)
        .map(|(s, _)| s)
        .collect();
    let elapsed = t.elapsed();
    let provable: Vec<Sequent> = class
        .iter()
        .zip(&results)
        .filter(|(_, (d, _))| *d)
        .map(|(s, _)| s.clone())
        .collect();
    let pass = class.len() == CLASS_1_SIZE && mismatches.is_empty() && elapsed < EXHAUSTIVE_LIMIT;
    let detail = format!(
        "{} sequents, {} provable, {} mismatches{}, {:.1}s",
        class.len(),
        provable.len(),
        mismatches.len(),
        mismatches
            .first()
            .map(|s| format!(" (first: {s})"))
            .unwrap_or_default(),
        elapsed.as_secs_f64()
    );
    (outcome(pass, detail), provable)
}

fn cut_elimination(provable: &[Sequent]) -> Outcome {
    let bad: Vec<&Sequent> = provable
        .par_iter()
        .filter(|s| match prove_cutfree(s) {
            Ok(p) => check_proof(&p).is_err() || !p.is_cut_free() || p.conclusion != **s,
            Err(_) => true,
        })
        .collect();
    outcome(
        bad.is_empty(),
        format!(
            "{} provable sequents, {} failures{}",
            provable.len(),
            bad.len(),
            bad.first()
                .map(|s| format!(" (first: {s})"))
                .unwrap_or_default()
        ),
    )
}

fn contraction_cut_elimination() -> Outcome {
    let t = Instant::now();
    let class = common::sequent_class(&["p", "q"], 2, 2, 2);
    let provable: Vec<&Sequent> = class.iter().filter(|s| common::valid(s)).collect();
    let failures: Vec<(&Sequent, String, bool)> = provable
        .par_iter()
        .filter_map(|s| {
            let input = prove_cutfree(s).expect("valid sequent");
            match eliminate_cut_and_contraction(&input) {
                Ok(p)
                    if check_proof(&p).is_ok()
                        && no_contraction_or_cut(&p)
                        && p.conclusion == **s =>
                {
                    None
                }
                Ok(_) => Some((*s, "output has contraction or cut".to_string(), false)),
                // The error names the sequent that could not be proved; it is the
                // end-sequent itself exactly when the final strip failed.
                Err(TransformError::ContractionRequired(at)) => {
                    Some((*s, format!("`{at}` needs contraction or cut"), at == **s))
                }
                Err(e) => Some((*s, e.to_string(), false)),
            }
        })
        .collect();
    let in_strip = failures.iter().filter(|f| f.2).count();
    // Failures on sequents that have no contraction+cut-free proof at all.
    let inherent = failures
        .par_iter()
        .filter(|(s, _, _)| prove_contraction_cut_free(s).expect("small").is_none())
        .count();
    let elapsed = t.elapsed();
    let pass = class.len() == CLASS_3_SIZE && failures.is_empty() && elapsed < EXHAUSTIVE_LIMIT;
    outcome(
        pass,
        format!(
            "{} sequents, {} provable, {} failures ({} in the final strip, {} with no contraction+cut-free proof at all){}, {:.1}s",
            class.len(),
            provable.len(),
            failures.len(),
            in_strip,
            inherent,
            failures
                .first()
                .map(|(s, e, _)| format!("; first: `{s}`: {e}"))
                .unwrap_or_default(),
            elapsed.as_secs_f64()
        ),
    )
}

fn identity_proofs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = Shape::default();
    let mut bad = 0;
    let mut sizes = 0;
    for _ in 0..IDENTITY_TRIALS {
        let f = loop {
            let c = rng.gen_range(0..=8);
            let f = formula_of_comp(&mut rng, &shape.vars, c);
            if f.size() <= IDENTITY_MAX_SIZE {
                break f;
            }
        };
        sizes += f.size();
        let p = identity_proof(&f);
        let want = Sequent::new(vec![f.clone()], vec![f]);
        if check_proof(&p).is_err() || p.conclusion != want || !no_contraction_or_cut(&p) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!(
            "{IDENTITY_TRIALS} formulas (mean size {:.1}), {bad} failures",
            sizes as f64 / IDENTITY_TRIALS as f64
        ),
    )
}

/// The sequent an inversion component should prove, computed from the table.
fn inversion_target(item: u8, s: &Sequent, pos: usize, component: usize) -> Sequent {
    let side = if matches!(item, 2 | 3 | 5 | 7) {
        Side::Ante
    } else {
        Side::Succ
    };
    let mut out = s.clone();
    let f = out.side_mut(side).remove(pos);
    let (l, r): (Vec<Formula>, Vec<Formula>) = match (item, &f) {
        (1, Formula::Neg(a)) => (vec![(**a).clone()], vec![]),
        (2, Formula::Neg(a)) => (vec![], vec![(**a).clone()]),
        (3, Formula::Conj(a, b)) => (vec![(**a).clone(), (**b).clone()], vec![]),
        (4, Formula::Conj(a, b)) => (
            vec![],
            vec![if component == 0 {
                (**a).clone()
            } else {
                (**b).clone()
            }],
        ),
        (5, Formula::Disj(a, b)) => (
            vec![if component == 0 {
                (**a).clone()
            } else {
                (**b).clone()
            }],
            vec![],
        ),
        (6, Formula::Disj(a, b)) => (vec![], vec![(**a).clone(), (**b).clone()]),
        (7, Formula::Impl(a, _)) if component == 0 => (vec![], vec![(**a).clone()]),
        (7, Formula::Impl(_, b)) => (vec![(**b).clone()], vec![]),
        (8, Formula::Impl(a, b)) => (vec![(**a).clone()], vec![(**b).clone()]),
        _ => panic!("shape mismatch"),
    };
    let mut ante = l;
    ante.extend(out.ante);
    out.ante = ante;
    out.succ.extend(r);
    out
}

fn with_connective(item: u8, a: Formula, b: Formula) -> Formula {
    match item {
        1 | 2 => Formula::neg(a),
        3 | 4 => Formula::conj(a, b),
        5 | 6 => Formula::disj(a, b),
        _ => Formula::implies(a, b),
    }
}

fn invertibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = Shape {
        max_comp: 2,
        max_side: 2,
        ..Shape::default()
    };
    let mut failures = Vec::new();
    let mut total = 0;
    for item in InvertItem::all() {
        let n = item.number();
        for trial in 0..INVERT_TRIALS {
            let (s, pos) = loop {
                let mut s = sequent(&mut rng, &shape);
                let f = with_connective(n, formula(&mut rng, &shape), formula(&mut rng, &shape));
                let xs = s.side_mut(item.side());
                let pos = rng.gen_range(0..=xs.len());
                xs.insert(pos, f);
                if decide(&s).expect("small") {
                    break (s, pos);
                }
            };
            // Alternate cut-free proofs (which may contract) with contraction-free ones
            // that contain cuts.
            let p = if trial % 2 == 0 {
                prove_cutfree(&s).expect("provable")
            } else {
                eliminate_contraction(&proof_with_cuts(&mut rng, &s, &shape, 1))
                    .expect("valid proof")
            };
            total += 1;
            let ok = match invert(item, &p, pos) {
                Ok(outs) => outs.iter().enumerate().all(|(c, q)| {
                    check_proof(q).is_ok()
                        && q.conclusion == inversion_target(n, &s, pos, c)
                        && (!p.is_cut_free() || q.is_cut_free())
                        && (!p.is_contraction_free() || q.is_contraction_free())
                }),
                Err(_) => false,
            };
            if !ok {
                failures.push(format!("item {n} on `{s}` at {pos}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{total} proofs over 8 items, {} failures{}",
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

fn degree_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = Shape {
        max_comp: 3,
        max_side: 2,
        ..Shape::default()
    };
    let mut bad = 0;
    let mut steps = 0;
    let mut max_degree = 0;
    let mut done = 0;
    while done < DEGREE_TRIALS {
        let s = plk_core::random::provable_sequent(&mut rng, &shape);
        let p = proof_with_cuts(&mut rng, &s, &shape, 2);
        if p.degree() == 0 {
            continue;
        }
        done += 1;
        max_degree = max_degree.max(p.degree());
        let mut cur = p;
        let ok = loop {
            if cur.degree() == 0 {
                break true;
            }
            match reduce_cut_degree(&cur) {
                Ok(next)
                    if next.degree() < cur.degree()
                        && check_proof(&next).is_ok()
                        && next.conclusion == s =>
                {
                    steps += 1;
                    cur = next;
                }
                _ => break false,
            }
        };
        if !ok {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("{DEGREE_TRIALS} proofs (max degree {max_degree}), {steps} reduction steps, {bad} failures"),
    )
}

fn non_eliminability() -> Outcome {
    let reports = run_witness_suite(DEFAULT_NODE_BUDGET).expect("suite sequents are provable");
    let required = reports.iter().filter(|r| r.verdict == "required").count();
    let slowest = reports.iter().map(|r| r.millis).max().unwrap_or(0);
    let pass = required == 12 && reports.len() == 12 && slowest < SEARCH_ITEM_LIMIT.as_millis();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| r.verdict != "required")
        .map(|r| format!("{} {}", r.item, r.verdict))
        .collect();
    outcome(
        pass,
        format!(
            "{required}/{} required, slowest item {slowest} ms{}",
            reports.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" ({})", failed.join(", "))
            }
        ),
    )
}

fn plk0_forms() -> Outcome {
    let t = Instant::now();
    let reports = run_plk0_suite().expect("constraints are supported");
    let elapsed = t.elapsed();
    let forms = ["=>", "p =>", "=> q", "p => q"];
    let covered = forms
        .iter()
        .all(|f| reports.iter().any(|r| r.sequent == *f));
    let nonempty: Vec<&str> = reports
        .iter()
        .filter(|r| !r.empty || r.provable_in_plk)
        .map(|r| r.sequent.as_str())
        .collect();
    outcome(
        covered && nonempty.is_empty() && elapsed < SEARCH_ITEM_LIMIT,
        format!(
            "{} atomic sequents with disjoint sides, {} with a proof, {:.2}s",
            reports.len(),
            nonempty.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn abss_theorem() -> Outcome {
    let r = run_theorem_trials(SEED, ABSS_TRIALS);
    outcome(
        r.all_true >= ABSS_TRIALS && r.counterexamples == 0,
        format!(
            "{} structures, {} with all conditions true, {} not eliminable",
            r.structures, r.all_true, r.counterexamples
        ),
    )
}

fn abss_converse() -> Outcome {
    let r = run_converse_trials(SEED, ABSS_TRIALS);
    outcome(
        r.eligible >= ABSS_TRIALS && r.failed == 0,
        format!(
            "{} structures, {} eligible, {} constructions pass, {} fail (by condition: {:?})",
            r.structures, r.eligible, r.succeeded, r.failed, r.failures_by_condition
        ),
    )
}

fn witness_demo() -> Outcome {
    let r = run_demo(SEED, NSS_POOL).expect("pools are valid");
    outcome(
        r.passed() && r.cut_instances >= NSS_POOL && r.other_instances >= NSS_POOL,
        format!(
            "cut: {}/{} not respected; weakening/exchange/logical: {}/{} respected; contraction: {}/{} as expected",
            r.cut_not_respected,
            r.cut_instances,
            r.other_respected,
            r.other_instances,
            r.contraction_as_expected,
            r.contraction_instances
        ),
    )
}

fn multiplicative_to_additive() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shape = Shape {
        max_comp: 2,
        max_side: 2,
        ..Shape::default()
    };
    let mut bad = 0;
    for _ in 0..MCUT_TRIALS {
        let p = proof_with_mcut(&mut rng, &shape);
        let ok = match mcut_to_acut(&p) {
            Ok(q) => {
                check_proof(&q).is_ok()
                    && q.conclusion == p.conclusion
                    && !q.uses(RuleId::CutMultiplicative)
            }
            Err(_) => false,
        };
        if !ok {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{MCUT_TRIALS} proofs, {bad} failures"))
}

fn main() {
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let mut report = |n: u8, name: &'static str, o: Outcome| {
        println!(
            "{} {n:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, name, o));
    };

    let class = common::sequent_class(&["p", "q", "r"], 3, 2, 2);
    let (o1, provable) = oracle_equivalence(&class);
    drop(class);
    report(1, "decide agrees with truth tables", o1);
    report(
        2,
        "cut-free proofs for provable sequents",
        cut_elimination(&provable),
    );
    drop(provable);
    report(
        3,
        "contraction and cut elimination pipeline",
        contraction_cut_elimination(),
    );
    report(4, "identity proofs", identity_proofs());
    report(5, "inversions", invertibility());
    report(6, "cut degree reduction", degree_reduction());
    report(7, "non-eliminability witnesses", non_eliminability());
    report(
        8,
        "no proofs of disjoint atomic sequents with atomic cut",
        plk0_forms(),
    );
    report(
        9,
        "abstract elimination conditions imply eliminability",
        abss_theorem(),
    );
    report(10, "converse construction", abss_converse());
    report(11, "seqcomp as a witness function for cut", witness_demo());
    report(
        12,
        "multiplicative to additive cut",
        multiplicative_to_additive(),
    );

    let failed = results.iter().filter(|(_, _, o)| !o.pass).count();
    println!(
        "{}/{} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
