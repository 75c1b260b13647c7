//! Inversion of logical rules on whole proofs.

use std::fmt;
use std::str::FromStr;

use crate::calculus::{check_proof, Proof};
use crate::formula::Formula;
use crate::sequent::Side;

use super::lift::{AtIntro, Lift};
use super::TransformError;

/// The eight inversions, numbered by the shape they start from.
///
/// | item | from | to |
/// |---|---|---|
/// | 1 | `G => D, ~A` | `A, G => D` |
/// | 2 | `~A, G => D` | `G => D, A` |
/// | 3 | `A & B, G => D` | `A, B, G => D` |
/// | 4 | `G => D, A & B` | `G => D, A` and `G => D, B` |
/// | 5 | `A | B, G => D` | `A, G => D` and `B, G => D` |
/// | 6 | `G => D, A | B` | `G => D, A, B` |
/// | 7 | `A -> B, G => D` | `G => D, A` and `B, G => D` |
/// | 8 | `G => D, A -> B` | `A, G => D, B` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvertItem(u8);

impl InvertItem {
    pub fn new(n: u8) -> Option<InvertItem> {
        (1..=8).contains(&n).then_some(InvertItem(n))
    }

    pub fn all() -> impl Iterator<Item = InvertItem> {
        (1..=8).map(InvertItem)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Side of the formula being inverted.
    pub fn side(self) -> Side {
        match self.0 {
            2 | 3 | 5 | 7 => Side::Ante,
            _ => Side::Succ,
        }
    }

    /// Number of resulting proofs.
    pub fn components(self) -> usize {
        match self.0 {
            4 | 5 | 7 => 2,
            _ => 1,
        }
    }

    /// Does `f` have the connective this item inverts?
    pub fn applies_to(self, f: &Formula) -> bool {
        matches!(
            (self.0, f),
            (1 | 2, Formula::Neg(_))
                | (3 | 4, Formula::Conj(..))
                | (5 | 6, Formula::Disj(..))
                | (7 | 8, Formula::Impl(..))
        )
    }

    /// Formulas replacing one occurrence: `(prepended to the antecedent, appended to the succedent)`.
    fn replacement(self, f: &Formula, component: usize) -> (Vec<Formula>, Vec<Formula>) {
        let c = |x: &std::sync::Arc<Formula>| (**x).clone();
        match (self.0, f, component) {
            (1, Formula::Neg(a), _) => (vec![c(a)], vec![]),
            (2, Formula::Neg(a), _) => (vec![], vec![c(a)]),
            (3, Formula::Conj(a, b), _) => (vec![c(a), c(b)], vec![]),
            (4, Formula::Conj(a, _), 0) => (vec![], vec![c(a)]),
            (4, Formula::Conj(_, b), _) => (vec![], vec![c(b)]),
            (5, Formula::Disj(a, _), 0) => (vec![c(a)], vec![]),
            (5, Formula::Disj(_, b), _) => (vec![c(b)], vec![]),
            (6, Formula::Disj(a, b), _) => (vec![], vec![c(a), c(b)]),
            (7, Formula::Impl(a, _), 0) => (vec![], vec![c(a)]),
            (7, Formula::Impl(_, b), _) => (vec![c(b)], vec![]),
            (8, Formula::Impl(a, b), _) => (vec![c(a)], vec![c(b)]),
            _ => unreachable!("checked by applies_to"),
        }
    }
}

impl fmt::Display for InvertItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for InvertItem {
    type Err = String;

    fn from_str(s: &str) -> Result<InvertItem, String> {
        s.parse::<u8>()
            .ok()
            .and_then(InvertItem::new)
            .ok_or_else(|| format!("inversion item must be 1 to 8, got {s:?}"))
    }
}

/// One component of an inversion. The formula at `position` on the item's side is removed;
/// its replacement goes to the front of the antecedent and the back of the succedent.
///
/// The result uses contraction or cut only where the input does, and its degree is at most
/// the input's.
pub fn invert_component(
    item: InvertItem,
    component: usize,
    proof: &Proof,
    position: usize,
) -> Result<Proof, TransformError> {
    check_proof(proof)?;
    let side = item.side();
    let f =
        proof.conclusion.side(side).get(position).ok_or_else(|| {
            TransformError::WrongShape(format!("no formula at position {position}"))
        })?;
    if !item.applies_to(f) {
        return Err(TransformError::WrongShape(format!(
            "item {item} does not apply to `{f}`"
        )));
    }
    if component >= item.components() {
        return Err(TransformError::WrongShape(format!(
            "item {item} has {} component(s)",
            item.components()
        )));
    }
    let (left, right) = item.replacement(f, component);
    let lift = Lift {
        side,
        left,
        right,
        at_intro: AtIntro::KeepPremise(component),
    };
    lift.run(proof, &[position])
}

/// All components of an inversion, in order.
pub fn invert(
    item: InvertItem,
    proof: &Proof,
    position: usize,
) -> Result<Vec<Proof>, TransformError> {
    (0..item.components())
        .map(|c| invert_component(item, c, proof, position))
        .collect()
}
