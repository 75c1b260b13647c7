//! Oracles and enumerators shared by the integration tests. Nothing here calls into the
//! prover or the closure code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use plk_core::abss::FiniteAbss;
use plk_core::{Formula, Sequent};

fn holds(f: &Formula, val: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(v) => val(v.name()),
        Formula::Neg(a) => !holds(a, val),
        Formula::Conj(a, b) => holds(a, val) && holds(b, val),
        Formula::Disj(a, b) => holds(a, val) || holds(b, val),
        Formula::Impl(a, b) => !holds(a, val) || holds(b, val),
    }
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(v) => {
            out.insert(v.name().to_string());
        }
        Formula::Neg(a) => collect_vars(a, out),
        Formula::Conj(a, b) | Formula::Disj(a, b) | Formula::Impl(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

/// Truth-table validity of the conjunction of the antecedent implying the disjunction of
/// the succedent.
pub fn valid(s: &Sequent) -> bool {
    let mut vars = BTreeSet::new();
    for f in s.ante.iter().chain(&s.succ) {
        collect_vars(f, &mut vars);
    }
    let vars: Vec<String> = vars.into_iter().collect();
    (0u32..1 << vars.len()).all(|bits| {
        let val = |x: &str| {
            let i = vars.iter().position(|v| v == x).expect("collected");
            bits >> i & 1 == 1
        };
        !s.ante.iter().all(|f| holds(f, &val)) || s.succ.iter().any(|f| holds(f, &val))
    })
}

/// Number of connectives, each counted once.
pub fn connectives(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) => 0,
        Formula::Neg(a) => 1 + connectives(a),
        Formula::Conj(a, b) | Formula::Disj(a, b) | Formula::Impl(a, b) => {
            1 + connectives(a) + connectives(b)
        }
    }
}

/// Every formula over `vars` with at most `max` connectives.
pub fn formulas(vars: &[&str], max: usize) -> Vec<Formula> {
    let mut by_count: Vec<Vec<Formula>> = vec![vars.iter().map(|v| Formula::atom(v)).collect()];
    for n in 1..=max {
        let mut level = Vec::new();
        for a in &by_count[n - 1] {
            level.push(Formula::neg(a.clone()));
        }
        for k in 0..n {
            for a in &by_count[k] {
                for b in &by_count[n - 1 - k] {
                    level.push(Formula::conj(a.clone(), b.clone()));
                    level.push(Formula::disj(a.clone(), b.clone()));
                    level.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        by_count.push(level);
    }
    by_count.into_iter().flatten().collect()
}

/// All ordered lists of formulas from `pool` of length at most `max_len` whose connective
/// counts sum to at most `budget`, tagged with that sum.
fn sides(pool: &[Formula], max_len: usize, budget: usize) -> Vec<(Vec<Formula>, usize)> {
    let mut out = vec![(Vec::new(), 0)];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (xs, c) in &frontier {
            for f in pool {
                let c2 = c + connectives(f);
                if c2 <= budget {
                    let mut ys: Vec<Formula> = xs.clone();
                    ys.push(f.clone());
                    next.push((ys, c2));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every ordered sequent over `vars`, at most `max_side` formulas per side, each formula
/// with at most `max_connectives` connectives, and at most `max_total` connectives in all.
pub fn sequent_class(
    vars: &[&str],
    max_side: usize,
    max_connectives: usize,
    max_total: usize,
) -> Vec<Sequent> {
    let pool = formulas(vars, max_connectives);
    let all = sides(&pool, max_side, max_total);
    let mut out = Vec::new();
    for (l, cl) in &all {
        for (r, cr) in &all {
            if cl + cr <= max_total {
                out.push(Sequent::new(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Iterates "add every conclusion whose premises are all present" until nothing changes.
pub fn naive_closure(a: &FiniteAbss, exclude: Option<&str>) -> BTreeSet<String> {
    let mut s: BTreeSet<String> = BTreeSet::new();
    loop {
        let before = s.len();
        for r in a.rules() {
            if Some(r.name.as_str()) == exclude {
                continue;
            }
            for i in &r.instances {
                if i.premises.iter().all(|p| s.contains(p)) {
                    s.insert(i.conclusion.clone());
                }
            }
        }
        if s.len() == before {
            return s;
        }
    }
}
