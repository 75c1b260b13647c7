//! Proof theory for PLK, the classical propositional sequent calculus with explicit
//! structural rules.
//!
//! The crate checks proofs, decides provability, builds cut-free proofs and transforms
//! proofs to remove contraction and lower cut complexity. It also searches for proofs
//! under forbidden-rule constraints, and evaluates abstract rule systems against
//! eliminability criteria.

pub mod abss;
pub mod calculus;
pub mod formula;
pub mod nonelim;
pub mod nss;
pub mod proof_json;
pub mod prover;
pub mod random;
pub mod render;
pub mod sequent;
pub mod transform;

pub use calculus::{
    check_instance, check_proof, derive_by_weakening_exchange, weaken_to, Active, CheckError,
    Derivation, NotSubsequent, Proof, RuleId, RuleInstance, RuleViolation,
};
pub use formula::{parse_formula, Formula, ParseError, Var};
pub use prover::{
    certify_unprovable, decide, identity_proof, prove_contraction_cut_free, prove_cutfree,
    verify_certificate, Certificate, ProverError,
};
pub use sequent::{is_subsequent, parse_sequent, FormulaMultiset, Sequent, Side, Subsequent};
pub use transform::TransformError;
