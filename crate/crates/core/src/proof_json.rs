//! JSON proof files.
//!
//! ```json
//! {"rule": "WL", "seq": {"ante": ["q", "p"], "succ": ["p"]},
//!  "active": {"principal": "q"},
//!  "premises": [{"rule": "Axiom", "seq": {"ante": ["p"], "succ": ["p"]}, "premises": []}]}
//! ```
//!
//! `active` may be omitted on input, in which case it is recovered from the node's shape.
//! Loading checks the whole proof.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{check_proof, infer_active, Active, CheckError, Proof, RuleId};
use crate::formula::{parse_formula, Formula, ParseError};
use crate::sequent::Sequent;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqJson {
    ante: Vec<String>,
    succ: Vec<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActiveJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    principal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    swap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cut: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    rule: RuleId,
    seq: SeqJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    active: Option<ActiveJson>,
    #[serde(default)]
    premises: Vec<NodeJson>,
}

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("malformed proof JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula {text:?}: {source}")]
    Formula { text: String, source: ParseError },
    #[error("bad active data: {0}")]
    Active(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

fn formula(text: &str) -> Result<Formula, ProofFileError> {
    parse_formula(text).map_err(|source| ProofFileError::Formula {
        text: text.to_string(),
        source,
    })
}

fn to_json(p: &Proof) -> NodeJson {
    let active = match &p.active {
        Active::Principal(f) => ActiveJson {
            principal: Some(f.to_string()),
            ..Default::default()
        },
        Active::Swap(i) => ActiveJson {
            swap: Some(*i),
            ..Default::default()
        },
        Active::Cut(f) => ActiveJson {
            cut: Some(f.to_string()),
            ..Default::default()
        },
    };
    NodeJson {
        rule: p.rule,
        seq: SeqJson {
            ante: p.conclusion.ante.iter().map(|f| f.to_string()).collect(),
            succ: p.conclusion.succ.iter().map(|f| f.to_string()).collect(),
        },
        active: Some(active),
        premises: p.premises.iter().map(to_json).collect(),
    }
}

fn from_json(n: NodeJson) -> Result<Proof, ProofFileError> {
    let ante = n
        .seq
        .ante
        .iter()
        .map(|s| formula(s))
        .collect::<Result<_, _>>()?;
    let succ = n
        .seq
        .succ
        .iter()
        .map(|s| formula(s))
        .collect::<Result<_, _>>()?;
    let conclusion = Sequent::new(ante, succ);
    let premises = n
        .premises
        .into_iter()
        .map(from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let active = match n.active {
        None => {
            let refs: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
            infer_active(n.rule, &refs, &conclusion)
                .map_err(|e| ProofFileError::Active(e.to_string()))?
        }
        Some(a) => match (a.principal, a.swap, a.cut) {
            (Some(f), None, None) => Active::Principal(formula(&f)?),
            (None, Some(i), None) => Active::Swap(i),
            (None, None, Some(f)) => Active::Cut(formula(&f)?),
            _ => {
                return Err(ProofFileError::Active(
                    "exactly one of principal, swap, cut is required".into(),
                ))
            }
        },
    };
    Ok(Proof {
        rule: n.rule,
        active,
        conclusion,
        premises,
    })
}

/// Serializes a proof, one node per object, pretty printed.
pub fn proof_to_json(p: &Proof) -> String {
    serde_json::to_string_pretty(&to_json(p)).expect("proof serializes")
}

pub fn proof_to_value(p: &Proof) -> serde_json::Value {
    serde_json::to_value(to_json(p)).expect("proof serializes")
}

/// Parses and checks a proof file. Nesting depth is unbounded; the stack grows as needed.
pub fn proof_from_json(text: &str) -> Result<Proof, ProofFileError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let node = NodeJson::deserialize(serde_stacker::Deserializer::new(&mut de))?;
    de.end()?;
    let p = from_json(node)?;
    check_proof(&p)?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::RuleId;

    #[test]
    fn round_trip() {
        let p = Proof::unary(
            RuleId::WL,
            "q".parse().unwrap(),
            Proof::axiom("p".parse().unwrap()),
        );
        let text = proof_to_json(&p);
        assert_eq!(proof_from_json(&text).unwrap(), p);
    }

    #[test]
    fn active_is_optional() {
        let text = r#"{"rule":"WL","seq":{"ante":["q","p"],"succ":["p"]},
            "premises":[{"rule":"Axiom","seq":{"ante":["p"],"succ":["p"]},"premises":[]}]}"#;
        let p = proof_from_json(text).unwrap();
        assert_eq!(p.active, Active::Principal("q".parse().unwrap()));
    }

    #[test]
    fn rejects_unknown_fields_and_bad_steps() {
        let unknown =
            r#"{"rule":"Axiom","seq":{"ante":["p"],"succ":["p"]},"premises":[],"extra":1}"#;
        assert!(matches!(
            proof_from_json(unknown),
            Err(ProofFileError::Json(_))
        ));
        let wrong = r#"{"rule":"Axiom","seq":{"ante":["p"],"succ":["q"]},"premises":[]}"#;
        assert!(matches!(
            proof_from_json(wrong),
            Err(ProofFileError::Check(_))
        ));
        let rule = r#"{"rule":"Foo","seq":{"ante":["p"],"succ":["p"]},"premises":[]}"#;
        assert!(matches!(
            proof_from_json(rule),
            Err(ProofFileError::Json(_))
        ));
    }

    #[test]
    fn deep_proofs_parse() {
        let mut p = Proof::axiom("p".parse().unwrap());
        for _ in 0..400 {
            p = Proof::unary(RuleId::WR, "q".parse().unwrap(), p);
        }
        assert_eq!(proof_from_json(&proof_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let text = r#"{"rule":"Axiom","seq":{"ante":["p"],"succ":["p"]},"premises":[]} x"#;
        assert!(matches!(
            proof_from_json(text),
            Err(ProofFileError::Json(_))
        ));
    }
}
