//! Proof transformations: inversion, contraction elimination, cut-degree reduction,
//! multiplicative-to-additive cut conversion and the combined contraction+cut pipeline.

mod contraction;
mod degree;
mod invert;
mod lift;
mod mcut;
mod pipeline;

pub use contraction::eliminate_contraction;
pub use degree::{eliminate_nonatomic_cuts, reduce_cut_degree};
pub use invert::{invert, invert_component, InvertItem};
pub use mcut::mcut_to_acut;
pub use pipeline::{
    eliminate_cut_and_contraction, part_one, part_two, strip_weakened_occurrence, witness_formula,
};

use thiserror::Error;

use crate::calculus::{weaken_to, CheckError, Proof};
use crate::prover::ProverError;
use crate::sequent::Sequent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input proof is invalid: {0}")]
    InvalidInput(#[from] CheckError),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("no cut with a non-atomic cut formula")]
    DegreeZero,
    #[error(
        "the occurrence cannot be removed: it reaches an axiom or a rule that uses it, in `{0}`"
    )]
    NotRemovable(Sequent),
    #[error("`{0}` has no proof free of both contraction and cut")]
    ContractionRequired(Sequent),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// Rearranges (and if needed weakens) the end of a proof. The callers know the target
/// has the right formulas, so a failure here is a bug.
pub(crate) fn arrange(p: Proof, to: &Sequent) -> Proof {
    weaken_to(p, to).unwrap_or_else(|e| panic!("internal rearrangement failed: {e}"))
}

/// Path to the deepest node satisfying `pred`, ties going to the leftmost.
pub(crate) fn highest_leftmost(p: &Proof, pred: &dyn Fn(&Proof) -> bool) -> Option<Vec<usize>> {
    fn rec(
        p: &Proof,
        pred: &dyn Fn(&Proof) -> bool,
        path: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
    ) {
        if pred(p) && best.as_ref().is_none_or(|b| path.len() > b.len()) {
            *best = Some(path.clone());
        }
        for (i, c) in p.premises.iter().enumerate() {
            path.push(i);
            rec(c, pred, path, best);
            path.pop();
        }
    }
    let mut best = None;
    rec(p, pred, &mut Vec::new(), &mut best);
    best
}
