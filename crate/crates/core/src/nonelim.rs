//! Exhaustive proof search under forbidden-rule constraints, used to show that a rule
//! cannot be dropped from the contraction+cut-free fragment.
//!
//! Search runs backwards from the goal. Contraction must be forbidden and cut, when
//! allowed, is restricted to atoms; with those restrictions only finitely many sequents
//! are reachable. Provability inside that space is a least fixpoint, and it agrees with
//! provability by loop-free proofs, since a branch that repeats a sequent can always be
//! shortened.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{Active, Proof, RuleId};
use crate::formula::{Formula, Var};
use crate::prover::{decide, ProverError};
use crate::sequent::Sequent;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConstraints {
    pub forbidden: BTreeSet<RuleId>,
    /// Allow additive cuts on atoms. Non-atomic cut is never searched.
    pub allow_atomic_cut: bool,
    /// Only loop-free proofs are enumerated. Must be true.
    pub loop_free: bool,
    /// Maximum number of distinct sequents explored.
    pub node_budget: u64,
    /// Atoms available as cut formulas; defaults to the goal's variables.
    pub cut_vars: Option<Vec<Var>>,
    /// Longest side a cut premise may have; defaults to the goal's longest side plus the
    /// number of cut atoms.
    pub max_side_len: Option<usize>,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            forbidden: [
                RuleId::CL,
                RuleId::CR,
                RuleId::CutAdditive,
                RuleId::CutMultiplicative,
            ]
            .into(),
            allow_atomic_cut: false,
            loop_free: true,
            node_budget: DEFAULT_NODE_BUDGET,
            cut_vars: None,
            max_side_len: None,
        }
    }
}

impl SearchConstraints {
    pub fn forbidding(rules: &[RuleId]) -> SearchConstraints {
        let mut c = SearchConstraints::default();
        c.forbidden.extend(rules.iter().copied());
        c
    }

    fn allows(&self, r: RuleId) -> bool {
        !self.forbidden.contains(&r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonelimError {
    #[error("unsupported constraints: {0}")]
    UnsupportedConstraints(String),
    #[error("`{0}` is not provable in PLK, so no rule can be required for it")]
    NotProvable(Sequent),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// One backward step: a rule instance concluding the sequent it was generated from.
#[derive(Debug, Clone)]
struct Step {
    rule: RuleId,
    active: Active,
    premises: Vec<Sequent>,
}

fn front(f: Formula, rest: &[Formula]) -> Vec<Formula> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(f);
    v.extend_from_slice(rest);
    v
}

fn back(rest: &[Formula], fs: &[Formula]) -> Vec<Formula> {
    let mut v = rest.to_vec();
    v.extend_from_slice(fs);
    v
}

/// All backward steps from `s`, in rule declaration order, principal positions left to right.
fn steps(s: &Sequent, c: &SearchConstraints, cut_vars: &[Formula], max_len: usize) -> Vec<Step> {
    let mut out = Vec::new();
    let first = s.ante.first();
    let last = s.succ.last();
    let (gamma, delta) = (
        s.ante.get(1..).unwrap_or(&[]),
        &s.succ[..s.succ.len().saturating_sub(1)],
    );
    let push = |out: &mut Vec<Step>, rule: RuleId, active: Active, premises: Vec<Sequent>| {
        if c.allows(rule) {
            out.push(Step {
                rule,
                active,
                premises,
            });
        }
    };
    let unary = |f: &Formula| Active::Principal(f.clone());
    let sub = |x: &std::sync::Arc<Formula>| (**x).clone();

    if let ([a], [b]) = (s.ante.as_slice(), s.succ.as_slice()) {
        if a == b && a.is_atomic() {
            push(&mut out, RuleId::Axiom, unary(a), vec![]);
        }
    }
    if let Some(a) = first {
        push(
            &mut out,
            RuleId::WL,
            unary(a),
            vec![Sequent::new(gamma.to_vec(), s.succ.clone())],
        );
    }
    if let Some(b) = last {
        push(
            &mut out,
            RuleId::WR,
            unary(b),
            vec![Sequent::new(s.ante.clone(), delta.to_vec())],
        );
    }
    for i in 0..s.ante.len().saturating_sub(1) {
        if s.ante[i] != s.ante[i + 1] {
            let mut p = s.clone();
            p.ante.swap(i, i + 1);
            push(&mut out, RuleId::EL, Active::Swap(i), vec![p]);
        }
    }
    for i in 0..s.succ.len().saturating_sub(1) {
        if s.succ[i] != s.succ[i + 1] {
            let mut p = s.clone();
            p.succ.swap(i, i + 1);
            push(&mut out, RuleId::ER, Active::Swap(i), vec![p]);
        }
    }
    if let Some(f @ Formula::Neg(a)) = first {
        push(
            &mut out,
            RuleId::NegL,
            unary(f),
            vec![Sequent::new(gamma.to_vec(), back(&s.succ, &[sub(a)]))],
        );
    }
    if let Some(f @ Formula::Neg(a)) = last {
        push(
            &mut out,
            RuleId::NegR,
            unary(f),
            vec![Sequent::new(front(sub(a), &s.ante), delta.to_vec())],
        );
    }
    if let Some(f @ Formula::Conj(a, b)) = first {
        push(
            &mut out,
            RuleId::ConjLLeft,
            unary(f),
            vec![Sequent::new(front(sub(a), gamma), s.succ.clone())],
        );
        push(
            &mut out,
            RuleId::ConjLRight,
            unary(f),
            vec![Sequent::new(front(sub(b), gamma), s.succ.clone())],
        );
    }
    if let Some(f @ Formula::Conj(a, b)) = last {
        push(
            &mut out,
            RuleId::ConjR,
            unary(f),
            vec![
                Sequent::new(s.ante.clone(), back(delta, &[sub(a)])),
                Sequent::new(s.ante.clone(), back(delta, &[sub(b)])),
            ],
        );
    }
    if let Some(f @ Formula::Disj(a, b)) = first {
        push(
            &mut out,
            RuleId::DisjL,
            unary(f),
            vec![
                Sequent::new(front(sub(a), gamma), s.succ.clone()),
                Sequent::new(front(sub(b), gamma), s.succ.clone()),
            ],
        );
    }
    if let Some(f @ Formula::Disj(a, b)) = last {
        push(
            &mut out,
            RuleId::DisjRLeft,
            unary(f),
            vec![Sequent::new(s.ante.clone(), back(delta, &[sub(a)]))],
        );
        push(
            &mut out,
            RuleId::DisjRRight,
            unary(f),
            vec![Sequent::new(s.ante.clone(), back(delta, &[sub(b)]))],
        );
    }
    if let Some(f @ Formula::Impl(a, b)) = first {
        push(
            &mut out,
            RuleId::ImplL,
            unary(f),
            vec![
                Sequent::new(gamma.to_vec(), back(&s.succ, &[sub(a)])),
                Sequent::new(front(sub(b), gamma), s.succ.clone()),
            ],
        );
    }
    if let Some(f @ Formula::Impl(a, b)) = last {
        push(
            &mut out,
            RuleId::ImplR,
            unary(f),
            vec![Sequent::new(front(sub(a), &s.ante), back(delta, &[sub(b)]))],
        );
    }
    if c.allow_atomic_cut && c.allows(RuleId::CutAdditive) {
        let fits = s.ante.len() < max_len && s.succ.len() < max_len;
        if fits {
            for r in cut_vars {
                push(
                    &mut out,
                    RuleId::CutAdditive,
                    Active::Cut(r.clone()),
                    vec![s.with_back(r.clone()), s.with_front(r.clone())],
                );
            }
        }
    }
    out
}

/// The explored part of the backward search space together with provability inside it.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    sequents: Vec<Sequent>,
    /// Steps per sequent; premises as indices.
    steps: Vec<Vec<(Step, Vec<usize>)>>,
    /// Index of the step that first made each sequent provable.
    via: Vec<Option<usize>>,
    /// All reachable sequents were expanded within the budget.
    pub exhaustive: bool,
    pub nodes: u64,
}

impl SearchSpace {
    pub fn provable(&self) -> bool {
        self.via[0].is_some()
    }

    /// No proof exists under the constraints, and the search covered the whole space.
    pub fn is_empty(&self) -> bool {
        self.exhaustive && !self.provable()
    }

    /// A loop-free proof of the goal, if one exists in the explored space.
    pub fn witness_proof(&self) -> Option<Proof> {
        self.via[0]?;
        Some(self.build(0))
    }

    fn build(&self, i: usize) -> Proof {
        let k = self.via[i].expect("provable");
        let (step, prem) = &self.steps[i][k];
        let premises = prem.iter().map(|&j| self.build(j)).collect();
        Proof {
            rule: step.rule,
            active: step.active.clone(),
            conclusion: self.sequents[i].clone(),
            premises,
        }
    }

    /// Up to `limit` distinct loop-free proofs of the goal, in search order.
    pub fn proofs(&self, limit: usize) -> Vec<Proof> {
        let mut on_path = vec![false; self.sequents.len()];
        let mut budget = 100_000u64;
        self.enumerate(0, &mut on_path, limit, &mut budget)
    }

    fn enumerate(
        &self,
        i: usize,
        on_path: &mut [bool],
        limit: usize,
        budget: &mut u64,
    ) -> Vec<Proof> {
        let mut out = Vec::new();
        if self.via[i].is_none() || limit == 0 || *budget == 0 {
            return out;
        }
        *budget -= 1;
        on_path[i] = true;
        for (step, prem) in &self.steps[i] {
            if out.len() >= limit {
                break;
            }
            if prem.iter().any(|&j| on_path[j] || self.via[j].is_none()) {
                continue;
            }
            let mut combos: Vec<Vec<Proof>> = vec![Vec::new()];
            for &j in prem {
                let subs = self.enumerate(j, on_path, limit - out.len(), budget);
                let mut next = Vec::new();
                for c in &combos {
                    for s in &subs {
                        if next.len() >= limit - out.len() {
                            break;
                        }
                        let mut c2 = c.clone();
                        c2.push(s.clone());
                        next.push(c2);
                    }
                }
                combos = next;
            }
            for premises in combos {
                if out.len() >= limit {
                    break;
                }
                out.push(Proof {
                    rule: step.rule,
                    active: step.active.clone(),
                    conclusion: self.sequents[i].clone(),
                    premises,
                });
            }
        }
        on_path[i] = false;
        out
    }
}

fn validate(c: &SearchConstraints) -> Result<(), NonelimError> {
    if !c.loop_free {
        return Err(NonelimError::UnsupportedConstraints(
            "only loop-free search terminates".into(),
        ));
    }
    if c.allows(RuleId::CL) || c.allows(RuleId::CR) {
        return Err(NonelimError::UnsupportedConstraints(
            "contraction must be forbidden".into(),
        ));
    }
    if c.allows(RuleId::CutMultiplicative) {
        return Err(NonelimError::UnsupportedConstraints(
            "multiplicative cut must be forbidden".into(),
        ));
    }
    if c.allows(RuleId::CutAdditive) && !c.allow_atomic_cut {
        return Err(NonelimError::UnsupportedConstraints(
            "additive cut is only searched on atoms; set allow_atomic_cut".into(),
        ));
    }
    Ok(())
}

/// Explores every sequent reachable backwards from `goal` and computes which are provable.
pub fn explore(goal: &Sequent, c: &SearchConstraints) -> Result<SearchSpace, NonelimError> {
    validate(c)?;
    let cut_vars: Vec<Formula> = match &c.cut_vars {
        Some(vs) => vs.iter().cloned().map(Formula::Atom).collect(),
        None => goal
            .vars_in_order()
            .into_iter()
            .map(Formula::Atom)
            .collect(),
    };
    let max_len = c
        .max_side_len
        .unwrap_or(goal.ante.len().max(goal.succ.len()) + cut_vars.len());

    let mut index: HashMap<Sequent, usize> = HashMap::new();
    let mut sequents = vec![goal.clone()];
    index.insert(goal.clone(), 0);
    let mut all_steps: Vec<Vec<(Step, Vec<usize>)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut exhaustive = true;
    while let Some(i) = queue.pop_front() {
        if all_steps.len() as u64 >= c.node_budget {
            exhaustive = false;
            break;
        }
        debug_assert_eq!(all_steps.len(), i);
        let here = steps(&sequents[i], c, &cut_vars, max_len);
        let mut resolved = Vec::with_capacity(here.len());
        for st in here {
            let ids = st
                .premises
                .iter()
                .map(|p| {
                    *index.entry(p.clone()).or_insert_with(|| {
                        sequents.push(p.clone());
                        queue.push_back(sequents.len() - 1);
                        sequents.len() - 1
                    })
                })
                .collect();
            resolved.push((st, ids));
        }
        all_steps.push(resolved);
    }
    // Unexpanded sequents have no steps.
    all_steps.resize_with(sequents.len(), Vec::new);
    let nodes = sequents.len() as u64;

    // Least fixpoint by premise counting.
    let n = sequents.len();
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut waiting: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut missing: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut ready = VecDeque::new();
    for (i, ss) in all_steps.iter().enumerate() {
        let mut m = Vec::with_capacity(ss.len());
        for (k, (_, prem)) in ss.iter().enumerate() {
            let distinct: BTreeSet<usize> = prem.iter().copied().collect();
            for &j in &distinct {
                waiting[j].push((i, k));
            }
            m.push(distinct.len());
            if distinct.is_empty() {
                ready.push_back((i, k));
            }
        }
        missing.push(m);
    }
    while let Some((i, k)) = ready.pop_front() {
        if via[i].is_some() {
            continue;
        }
        via[i] = Some(k);
        for &(p, kk) in &waiting[i] {
            missing[p][kk] -= 1;
            if missing[p][kk] == 0 && via[p].is_none() {
                ready.push_back((p, kk));
            }
        }
    }
    Ok(SearchSpace {
        sequents,
        steps: all_steps,
        via,
        exhaustive,
        nodes,
    })
}

/// Result of [`enumerate`].
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub proofs: Vec<Proof>,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// Up to `limit` loop-free proofs of `goal` under the constraints.
pub fn enumerate(
    goal: &Sequent,
    c: &SearchConstraints,
    limit: usize,
) -> Result<Enumeration, NonelimError> {
    let space = explore(goal, c)?;
    Ok(Enumeration {
        proofs: space.proofs(limit),
        exhaustive: space.exhaustive,
        nodes: space.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No contraction+cut-free proof avoids the rule(s).
    Required,
    /// A proof that avoids the rule(s).
    Counterexample(Box<Proof>),
    /// The budget ran out first.
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Required => "required",
            Verdict::Counterexample(_) => "counterexample",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Checks that every contraction+cut-free proof of the PLK-provable `s` uses one of `rules`.
pub fn verify_rule_required(
    s: &Sequent,
    rules: &[RuleId],
    node_budget: u64,
) -> Result<(Verdict, u64), NonelimError> {
    if rules.contains(&RuleId::Axiom) {
        return Err(NonelimError::UnsupportedConstraints(
            "the axiom cannot be forbidden".into(),
        ));
    }
    if !decide(s)? {
        return Err(NonelimError::NotProvable(s.clone()));
    }
    let mut c = SearchConstraints::forbidding(rules);
    c.node_budget = node_budget;
    let space = explore(s, &c)?;
    let verdict = match space.witness_proof() {
        Some(p) => Verdict::Counterexample(Box::new(p)),
        None if space.exhaustive => Verdict::Required,
        None => Verdict::Inconclusive,
    };
    Ok((verdict, space.nodes))
}

/// A sequent paired with the rule(s) claimed necessary for it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub item: &'static str,
    pub sequent: Sequent,
    pub rules: Vec<RuleId>,
}

/// Witnesses that none of the structural or logical rules can be dropped.
pub fn witness_suite() -> Vec<Witness> {
    let w = |item, s: &str, rules: &[RuleId]| Witness {
        item,
        sequent: s.parse().expect("suite sequent"),
        rules: rules.to_vec(),
    };
    vec![
        w("structural-1", "q, p => p", &[RuleId::WL]),
        w("structural-2", "p => p, q", &[RuleId::WR]),
        w("structural-3", "p => q, p", &[RuleId::ER]),
        w("structural-4", "p, q => p", &[RuleId::EL]),
        w("logical-1", "~p, p =>", &[RuleId::NegL]),
        w("logical-2", "=> p, ~p", &[RuleId::NegR]),
        w(
            "logical-3",
            "p & q => p",
            &[RuleId::ConjLLeft, RuleId::ConjLRight],
        ),
        w("logical-4", "p => p & p", &[RuleId::ConjR]),
        w("logical-5", "p | p => p", &[RuleId::DisjL]),
        w(
            "logical-6",
            "p => p | q",
            &[RuleId::DisjRLeft, RuleId::DisjRRight],
        ),
        w("logical-7", "p -> q, p => q", &[RuleId::ImplL]),
        w("logical-8", "=> p -> p", &[RuleId::ImplR]),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub item: String,
    pub sequent: String,
    pub rule: String,
    pub verdict: String,
    pub nodes: u64,
    pub millis: u128,
}

impl WitnessReport {
    pub fn line(&self) -> String {
        format!(
            "{:<13} {:<18} {:<24} {:<14} nodes={} ms={}",
            self.item, self.sequent, self.rule, self.verdict, self.nodes, self.millis
        )
    }
}

pub fn run_witness_suite(node_budget: u64) -> Result<Vec<WitnessReport>, NonelimError> {
    witness_suite()
        .into_iter()
        .map(|w| {
            let t = Instant::now();
            let (verdict, nodes) = verify_rule_required(&w.sequent, &w.rules, node_budget)?;
            Ok(WitnessReport {
                item: w.item.to_string(),
                sequent: w.sequent.to_string(),
                rule: w
                    .rules
                    .iter()
                    .map(|r| r.name())
                    .collect::<Vec<_>>()
                    .join("+"),
                verdict: verdict.name().to_string(),
                nodes,
                millis: t.elapsed().as_millis(),
            })
        })
        .collect()
}

/// Atomic sequents over `p`, `q` with at most two formulas per side and no variable
/// shared between the sides.
pub fn plk0_suite() -> Vec<Sequent> {
    let atoms = [Formula::atom("p"), Formula::atom("q")];
    let mut sides: Vec<Vec<Formula>> = vec![vec![]];
    for a in &atoms {
        sides.push(vec![a.clone()]);
    }
    for a in &atoms {
        for b in &atoms {
            sides.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut out = Vec::new();
    for l in &sides {
        for r in &sides {
            if l.iter().all(|f| !r.contains(f)) {
                out.push(Sequent::new(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Constraints for the contraction-free calculus with atomic cut on `p` and `q`.
pub fn plk0_constraints() -> SearchConstraints {
    SearchConstraints {
        forbidden: [RuleId::CL, RuleId::CR, RuleId::CutMultiplicative].into(),
        allow_atomic_cut: true,
        cut_vars: Some(vec![
            Var::new("p").expect("var"),
            Var::new("q").expect("var"),
        ]),
        ..SearchConstraints::default()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Plk0Report {
    pub sequent: String,
    pub provable_in_plk: bool,
    pub empty: bool,
    pub exhaustive: bool,
    pub nodes: u64,
    pub millis: u128,
}

pub fn run_plk0_suite() -> Result<Vec<Plk0Report>, NonelimError> {
    let c = plk0_constraints();
    plk0_suite()
        .into_iter()
        .map(|s| {
            let t = Instant::now();
            let space = explore(&s, &c)?;
            Ok(Plk0Report {
                sequent: s.to_string(),
                provable_in_plk: decide(&s)?,
                empty: space.is_empty(),
                exhaustive: space.exhaustive,
                nodes: space.nodes,
                millis: t.elapsed().as_millis(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_proof;

    fn s(x: &str) -> Sequent {
        x.parse().unwrap()
    }

    #[test]
    fn rejects_unsupported() {
        let mut c = SearchConstraints::default();
        c.forbidden.remove(&RuleId::CL);
        assert!(matches!(
            explore(&s("p => p"), &c),
            Err(NonelimError::UnsupportedConstraints(_))
        ));
        let c = SearchConstraints {
            loop_free: false,
            ..SearchConstraints::default()
        };
        assert!(explore(&s("p => p"), &c).is_err());
    }

    #[test]
    fn finds_counterexamples() {
        let (v, _) = verify_rule_required(&s("p => q, p"), &[RuleId::EL], 10_000).unwrap();
        let Verdict::Counterexample(p) = v else {
            panic!("expected a proof")
        };
        check_proof(&p).unwrap();
        assert!(!p.uses(RuleId::EL));
        let (v, _) = verify_rule_required(&s("p => q, p"), &[RuleId::ER], 10_000).unwrap();
        assert_eq!(v, Verdict::Required);
    }

    #[test]
    fn enumerated_proofs_are_loop_free_and_valid() {
        let e = enumerate(&s("p, q => q, p"), &SearchConstraints::default(), 20).unwrap();
        assert!(e.exhaustive);
        assert!(!e.proofs.is_empty());
        for p in &e.proofs {
            check_proof(p).unwrap();
            assert!(p.is_cut_free() && p.is_contraction_free());
        }
    }

    #[test]
    fn witness_suite_holds() {
        for r in run_witness_suite(DEFAULT_NODE_BUDGET).unwrap() {
            assert_eq!(r.verdict, "required", "{}", r.line());
        }
    }
}
