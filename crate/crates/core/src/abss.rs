//! Finite abstract sequent structures: opaque sequent tokens, rules given as finite
//! sets of instances, and provability as the least fixpoint of the rules.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub premises: Vec<String>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub name: String,
    pub instances: Vec<Instance>,
}

impl Rule {
    /// Every instance is premise-free. Validation guarantees rules are not mixed.
    pub fn is_axiomatic(&self) -> bool {
        self.instances.iter().all(|i| i.premises.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbssError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("token `{0}` is used but not declared")]
    UndeclaredToken(String),
    #[error("token `{0}` is declared twice")]
    DuplicateToken(String),
    #[error("rule `{0}` is declared twice")]
    DuplicateRule(String),
    #[error("rule `{0}` has no instances")]
    EmptyRule(String),
    #[error("rule `{0}` mixes premise-free and premised instances")]
    MixedRule(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` is axiomatic")]
    NotNonAxiomatic(String),
    #[error("no value for token `{0}`")]
    MissingValue(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(Hypothesis),
    #[error("constructed relation space fails condition ({condition}) at `{token}`")]
    ConverseFails { condition: u8, token: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    NonAxiomatic,
    Eliminable,
    Disjoint,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::NonAxiomatic => "rule is axiomatic",
            Hypothesis::Eliminable => "rule is not eliminable",
            Hypothesis::Disjoint => "rule shares an instance with another rule",
        })
    }
}

/// A validated finite structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAbss {
    sequents: Vec<String>,
    rules: Vec<Rule>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAbss {
    sequents: Vec<String>,
    rules: Vec<Rule>,
}

impl FiniteAbss {
    pub fn new(sequents: Vec<String>, rules: Vec<Rule>) -> Result<FiniteAbss, AbssError> {
        let mut index = HashMap::new();
        for (i, t) in sequents.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(AbssError::DuplicateToken(t.clone()));
            }
        }
        let mut names = BTreeSet::new();
        for r in &rules {
            if !names.insert(r.name.as_str()) {
                return Err(AbssError::DuplicateRule(r.name.clone()));
            }
            if r.instances.is_empty() {
                return Err(AbssError::EmptyRule(r.name.clone()));
            }
            let premised = r
                .instances
                .iter()
                .filter(|i| !i.premises.is_empty())
                .count();
            if premised != 0 && premised != r.instances.len() {
                return Err(AbssError::MixedRule(r.name.clone()));
            }
            for inst in &r.instances {
                for t in inst.premises.iter().chain([&inst.conclusion]) {
                    if !index.contains_key(t) {
                        return Err(AbssError::UndeclaredToken(t.clone()));
                    }
                }
            }
        }
        Ok(FiniteAbss {
            sequents,
            rules,
            index,
        })
    }

    pub fn from_json(src: &str) -> Result<FiniteAbss, AbssError> {
        let raw: RawAbss = serde_json::from_str(src).map_err(|e| AbssError::Json(e.to_string()))?;
        FiniteAbss::new(raw.sequents, raw.rules)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure serializes")
    }

    pub fn sequents(&self) -> &[String] {
        &self.sequents
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Result<&Rule, AbssError> {
        self.rules
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| AbssError::UnknownRule(name.to_string()))
    }

    fn rule_index(&self, name: &str) -> Result<usize, AbssError> {
        self.rules
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| AbssError::UnknownRule(name.to_string()))
    }

    fn tok(&self, t: &str) -> usize {
        self.index[t]
    }

    /// Provable tokens as a membership vector, optionally without rule `exclude`.
    fn closure_mask(&self, exclude: Option<usize>) -> Vec<bool> {
        let n = self.sequents.len();
        let mut proved = vec![false; n];
        // For each instance, the number of distinct premises not yet proved.
        let mut missing = Vec::new();
        let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut concl = Vec::new();
        let mut queue = VecDeque::new();
        for (ri, r) in self.rules.iter().enumerate() {
            if Some(ri) == exclude {
                continue;
            }
            for inst in &r.instances {
                let id = concl.len();
                concl.push(self.tok(&inst.conclusion));
                let prem: BTreeSet<usize> = inst.premises.iter().map(|t| self.tok(t)).collect();
                for &p in &prem {
                    waiting[p].push(id);
                }
                missing.push(prem.len());
                if prem.is_empty() {
                    queue.push_back(id);
                }
            }
        }
        while let Some(id) = queue.pop_front() {
            let c = concl[id];
            if proved[c] {
                continue;
            }
            proved[c] = true;
            for &j in &waiting[c] {
                missing[j] -= 1;
                if missing[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        proved
    }

    /// The least set of tokens closed under all rules, or all rules but `exclude`.
    pub fn closure(&self, exclude: Option<&str>) -> Result<BTreeSet<String>, AbssError> {
        let ex = exclude.map(|n| self.rule_index(n)).transpose()?;
        Ok(self
            .closure_mask(ex)
            .into_iter()
            .zip(&self.sequents)
            .filter(|(b, _)| *b)
            .map(|(_, t)| t.clone())
            .collect())
    }

    /// Removing `r` does not shrink the provable set.
    pub fn is_eliminable(&self, r: &str) -> Result<bool, AbssError> {
        let k = self.rule_index(r)?;
        Ok(self.closure_mask(None) == self.closure_mask(Some(k)))
    }

    /// `r` shares no instance with any other rule.
    pub fn is_disjoint(&self, r: &str) -> Result<bool, AbssError> {
        let k = self.rule_index(r)?;
        let own: BTreeSet<&Instance> = self.rules[k].instances.iter().collect();
        Ok(self
            .rules
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .all(|(_, o)| o.instances.iter().all(|x| !own.contains(x))))
    }

    fn shares_instance(&self, i: usize, k: usize) -> bool {
        if i == k {
            return true;
        }
        let own: BTreeSet<&Instance> = self.rules[k].instances.iter().collect();
        self.rules[i].instances.iter().any(|x| own.contains(x))
    }
}

/// A valuation of tokens into integers.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFunction {
    pub v: BTreeMap<String, i64>,
}

impl WitnessFunction {
    pub fn value(&self, t: &str) -> Result<i64, AbssError> {
        self.v
            .get(t)
            .copied()
            .ok_or_else(|| AbssError::MissingValue(t.to_string()))
    }

    pub fn from_json(src: &str) -> Result<WitnessFunction, AbssError> {
        serde_json::from_str(src).map_err(|e| AbssError::Json(e.to_string()))
    }
}

/// A binary relation on integer values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpace {
    pub pairs: BTreeSet<(i64, i64)>,
}

impl RelationSpace {
    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn from_json(src: &str) -> Result<RelationSpace, AbssError> {
        serde_json::from_str(src).map_err(|e| AbssError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

/// Values of all tokens, failing on the first missing one.
fn values(a: &FiniteAbss, v: &WitnessFunction) -> Result<Vec<i64>, AbssError> {
    a.sequents.iter().map(|t| v.value(t)).collect()
}

struct Ctx<'a> {
    a: &'a FiniteAbss,
    vals: Vec<i64>,
    rs: &'a RelationSpace,
    provable: Vec<bool>,
}

impl Ctx<'_> {
    /// Some premise is unrelated to the conclusion.
    fn escapes(&self, inst: &Instance) -> bool {
        let c = self.vals[self.a.tok(&inst.conclusion)];
        inst.premises
            .iter()
            .any(|p| !self.rs.contains(self.vals[self.a.tok(p)], c))
    }

    fn premises_provable(&self, inst: &Instance) -> bool {
        inst.premises.iter().all(|p| self.provable[self.a.tok(p)])
    }

    /// Every instance of rule `k` relates each premise to its conclusion. Returns the first
    /// offending conclusion.
    fn related(&self, k: usize) -> Option<String> {
        self.a.rules[k]
            .instances
            .iter()
            .find(|i| self.escapes(i))
            .map(|i| i.conclusion.clone())
    }

    /// Every provable token is an axiom or concluded by an escaping instance with provable
    /// premises, drawn from the rules admitted by `use_rule`.
    fn grounded(&self, use_rule: &dyn Fn(usize) -> bool) -> Option<String> {
        let mut axioms = vec![false; self.a.sequents.len()];
        let mut escaping = vec![false; self.a.sequents.len()];
        for (ri, r) in self.a.rules.iter().enumerate() {
            for inst in &r.instances {
                let c = self.a.tok(&inst.conclusion);
                if r.is_axiomatic() {
                    axioms[c] = true;
                } else if use_rule(ri) && self.premises_provable(inst) && self.escapes(inst) {
                    escaping[c] = true;
                }
            }
        }
        (0..self.a.sequents.len())
            .find(|&t| self.provable[t] && !axioms[t] && !escaping[t])
            .map(|t| self.a.sequents[t].clone())
    }

    /// Escaping instances with provable premises, from rules admitted by `use_rule`, have
    /// premises provable without rule `k`.
    fn transfers(&self, k: usize, use_rule: &dyn Fn(usize) -> bool) -> Option<String> {
        let without = self.a.closure_mask(Some(k));
        for (ri, r) in self.a.rules.iter().enumerate() {
            if !use_rule(ri) {
                continue;
            }
            for inst in &r.instances {
                if self.escapes(inst) && self.premises_provable(inst) {
                    if let Some(p) = inst.premises.iter().find(|p| !without[self.a.tok(p)]) {
                        return Some(p.clone());
                    }
                }
            }
        }
        None
    }
}

fn context<'a>(
    a: &'a FiniteAbss,
    rk: &str,
    rs: &'a RelationSpace,
    v: &WitnessFunction,
) -> Result<(Ctx<'a>, usize), AbssError> {
    let k = a.rule_index(rk)?;
    if a.rules[k].is_axiomatic() {
        return Err(AbssError::NotNonAxiomatic(rk.to_string()));
    }
    Ok((
        Ctx {
            a,
            vals: values(a, v)?,
            rs,
            provable: a.closure_mask(None),
        },
        k,
    ))
}

/// Evaluates the four sufficient conditions for `rk` to be eliminable.
///
/// 1. `rk` shares no instance with another rule.
/// 2. Every `rk` instance relates each premise value to the conclusion value.
/// 3. Every provable token is an axiom, or the conclusion of a non-axiomatic instance with
///    provable premises, one of which is unrelated to the conclusion.
/// 4. For instances of rules disjoint from `rk` with an unrelated premise and provable
///    premises, the premises are provable without `rk`.
pub fn check_abss_theorem_conditions(
    a: &FiniteAbss,
    rk: &str,
    rs: &RelationSpace,
    v: &WitnessFunction,
) -> Result<ConditionReport, AbssError> {
    let (ctx, k) = context(a, rk, rs, v)?;
    Ok(ConditionReport {
        c1: a.is_disjoint(rk)?,
        c2: ctx.related(k).is_none(),
        c3: ctx.grounded(&|_| true).is_none(),
        c4: ctx.transfers(k, &|i| !a.shares_instance(i, k)).is_none(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConverseReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl ConverseReport {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

fn converse_failures(
    a: &FiniteAbss,
    rk: &str,
    rs: &RelationSpace,
    v: &WitnessFunction,
) -> Result<[Option<String>; 3], AbssError> {
    let (ctx, k) = context(a, rk, rs, v)?;
    Ok([
        ctx.related(k),
        ctx.grounded(&|_| true),
        ctx.transfers(k, &|_| true),
    ])
}

/// Evaluates the three properties a relation space built for an eliminable rule should have:
/// conditions 1 and 2 above, and the transfer clause over all rules.
pub fn check_converse_conditions(
    a: &FiniteAbss,
    rk: &str,
    rs: &RelationSpace,
    v: &WitnessFunction,
) -> Result<ConverseReport, AbssError> {
    let [c1, c2, c3] = converse_failures(a, rk, rs, v)?;
    Ok(ConverseReport {
        c1: c1.is_none(),
        c2: c2.is_none(),
        c3: c3.is_none(),
    })
}

/// Builds the relation pairing each `rk` premise with the conclusion of its instance, with
/// tokens valued by their position, and re-verifies it.
pub fn converse_construct(
    a: &FiniteAbss,
    rk: &str,
) -> Result<(RelationSpace, WitnessFunction), AbssError> {
    let k = a.rule_index(rk)?;
    if a.rules[k].is_axiomatic() {
        return Err(AbssError::HypothesisViolated(Hypothesis::NonAxiomatic));
    }
    if !a.is_eliminable(rk)? {
        return Err(AbssError::HypothesisViolated(Hypothesis::Eliminable));
    }
    if !a.is_disjoint(rk)? {
        return Err(AbssError::HypothesisViolated(Hypothesis::Disjoint));
    }
    let v = WitnessFunction {
        v: a.sequents
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as i64))
            .collect(),
    };
    let mut rs = RelationSpace::default();
    for inst in &a.rules[k].instances {
        let c = a.tok(&inst.conclusion) as i64;
        for p in &inst.premises {
            rs.pairs.insert((a.tok(p) as i64, c));
        }
    }
    let fails = converse_failures(a, rk, &rs, &v)?;
    for (i, f) in fails.into_iter().enumerate() {
        if let Some(token) = f {
            return Err(AbssError::ConverseFails {
                condition: i as u8 + 1,
                token,
            });
        }
    }
    Ok((rs, v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbssParams {
    pub tokens: usize,
    pub rules: usize,
    pub instances_per_rule: usize,
    pub max_premises: usize,
    /// Probability that a rule is axiomatic.
    pub axiomatic_fraction: f64,
    /// No instance is shared between two rules.
    pub disjoint: bool,
}

impl Default for AbssParams {
    fn default() -> Self {
        AbssParams {
            tokens: 8,
            rules: 4,
            instances_per_rule: 4,
            max_premises: 2,
            axiomatic_fraction: 0.25,
            disjoint: true,
        }
    }
}

/// A pseudo-random structure determined by `seed` and `params`. Tokens are `t0`, `t1`, ...
/// and rules `R0`, `R1`, ...; rule `R0` is always axiomatic and `R1` never is.
pub fn generate_random_abss(seed: u64, params: &AbssParams) -> FiniteAbss {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.tokens.max(1);
    let sequents: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut used: BTreeSet<Instance> = BTreeSet::new();
    let mut rules = Vec::new();
    for ri in 0..params.rules {
        let axiomatic = match ri {
            0 => true,
            1 => false,
            _ => rng.gen_bool(params.axiomatic_fraction.clamp(0.0, 1.0)),
        };
        let mut own: BTreeSet<Instance> = BTreeSet::new();
        let mut instances = Vec::new();
        for _ in 0..params.instances_per_rule.max(1) * 4 {
            if instances.len() == params.instances_per_rule.max(1) {
                break;
            }
            let k = if axiomatic {
                0
            } else {
                rng.gen_range(1..=params.max_premises.max(1))
            };
            let inst = Instance {
                premises: (0..k)
                    .map(|_| sequents.choose(&mut rng).expect("token").clone())
                    .collect(),
                conclusion: sequents.choose(&mut rng).expect("token").clone(),
            };
            if own.contains(&inst) || (params.disjoint && used.contains(&inst)) {
                continue;
            }
            own.insert(inst.clone());
            instances.push(inst);
        }
        if instances.is_empty() {
            // Only reachable with very few tokens; a fresh conclusion keeps the rule nonempty.
            instances.push(Instance {
                premises: if axiomatic {
                    vec![]
                } else {
                    vec![sequents[0].clone()]
                },
                conclusion: sequents[0].clone(),
            });
        }
        used.extend(instances.iter().cloned());
        rules.push(Rule {
            name: format!("R{ri}"),
            instances,
        });
    }
    FiniteAbss::new(sequents, rules).expect("generated structures are valid")
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TheoremTrials {
    /// Structures generated.
    pub structures: u64,
    /// (structure, rule, relation space) triples with all four conditions true.
    pub all_true: u64,
    /// Of those, how many had a non-eliminable rule.
    pub counterexamples: u64,
    pub first_counterexample: Option<String>,
}

fn trial_params(rng: &mut ChaCha8Rng) -> AbssParams {
    AbssParams {
        tokens: rng.gen_range(4..=12),
        rules: rng.gen_range(2..=5),
        instances_per_rule: rng.gen_range(1..=5),
        max_premises: rng.gen_range(1..=3),
        axiomatic_fraction: 0.3,
        disjoint: rng.gen_bool(0.7),
    }
}

/// Draws random structures with random relation spaces until `target` cases satisfy all
/// four conditions (or a generous cap on structures is hit), and checks each is eliminable.
pub fn run_theorem_trials(seed: u64, target: u64) -> TheoremTrials {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TheoremTrials::default();
    let cap = target.saturating_mul(200).max(1000);
    while out.all_true < target && out.structures < cap {
        let a = generate_random_abss(rng.gen(), &trial_params(&mut rng));
        out.structures += 1;
        let n = a.sequents.len() as i64;
        for r in a.rules().iter().filter(|r| !r.is_axiomatic()) {
            // Values drawn from a small range, so distinct tokens may share a value.
            let range = rng.gen_range(1..=n);
            let v = WitnessFunction {
                v: a.sequents
                    .iter()
                    .map(|t| (t.clone(), rng.gen_range(0..range)))
                    .collect(),
            };
            let mut rs = RelationSpace::default();
            for inst in &r.instances {
                for p in &inst.premises {
                    rs.pairs.insert((v.v[p], v.v[&inst.conclusion]));
                }
            }
            let density = rng.gen_range(0.0..0.5);
            for x in 0..range {
                for y in 0..range {
                    if rng.gen_bool(density) {
                        rs.pairs.insert((x, y));
                    }
                }
            }
            let report = check_abss_theorem_conditions(&a, &r.name, &rs, &v).expect("valid input");
            if report.all() {
                out.all_true += 1;
                if !a.is_eliminable(&r.name).expect("known rule") {
                    out.counterexamples += 1;
                    out.first_counterexample.get_or_insert_with(|| a.to_json());
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConverseTrials {
    pub structures: u64,
    /// Structures with an eliminable, disjoint, non-axiomatic rule.
    pub eligible: u64,
    pub succeeded: u64,
    pub failed: u64,
    /// Failures by condition number.
    pub failures_by_condition: BTreeMap<u8, u64>,
    pub first_failure: Option<String>,
}

/// Draws random structures until `target` of them have an eligible rule, and runs the
/// converse construction on the first such rule of each.
pub fn run_converse_trials(seed: u64, target: u64) -> ConverseTrials {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ConverseTrials::default();
    let cap = target.saturating_mul(200).max(1000);
    while out.eligible < target && out.structures < cap {
        let mut params = trial_params(&mut rng);
        params.disjoint = true;
        let a = generate_random_abss(rng.gen(), &params);
        out.structures += 1;
        let rk = a.rules().iter().find(|r| {
            !r.is_axiomatic()
                && a.is_eliminable(&r.name).unwrap_or(false)
                && a.is_disjoint(&r.name).unwrap_or(false)
        });
        let Some(rk) = rk else { continue };
        out.eligible += 1;
        match converse_construct(&a, &rk.name) {
            Ok(_) => out.succeeded += 1,
            Err(AbssError::ConverseFails { condition, token }) => {
                out.failed += 1;
                *out.failures_by_condition.entry(condition).or_default() += 1;
                out.first_failure.get_or_insert_with(|| {
                    format!(
                        "rule {} condition ({condition}) at {token}: {}",
                        rk.name,
                        a.to_json()
                    )
                });
            }
            Err(e) => panic!("eligible rule rejected: {e}"),
        }
    }
    out
}
