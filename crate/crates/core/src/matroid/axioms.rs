use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::item::{GroundSet, ItemSet};

const AXIOM_LIMIT: usize = 12;

/// One violated independence axiom, with the sets that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The empty set is missing.
    EmptySetMissing,
    /// `subset` of the member `member` is missing.
    NotHereditary { member: ItemSet, subset: ItemSet },
    /// No element of `larger \ smaller` augments `smaller`.
    NoAugmentation { larger: ItemSet, smaller: ItemSet },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_matroid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, ground: &GroundSet) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| match *v {
                AxiomViolation::EmptySetMissing => "(I1) the empty set is not independent".into(),
                AxiomViolation::NotHereditary { member, subset } => format!(
                    "(I2) {} is independent but its subset {} is not",
                    ground.display(member),
                    ground.display(subset)
                ),
                AxiomViolation::NoAugmentation { larger, smaller } => format!(
                    "(I3) no element of {} extends {}",
                    ground.display(larger),
                    ground.display(smaller)
                ),
            })
            .collect()
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Checks an explicit set family against the three independence axioms.
///
/// Reports the first witness found for each violated axiom, scanning sets in
/// canonical order.
pub fn verify_axioms(ground: &GroundSet, family: &[ItemSet]) -> Result<AxiomReport> {
    if ground.len() > AXIOM_LIMIT {
        return Err(Error::TooLarge {
            what: "ground set",
            size: ground.len(),
            limit: AXIOM_LIMIT,
        });
    }
    let members: BTreeSet<ItemSet> = family.iter().copied().collect();
    if let Some(stray) = members.iter().find(|s| !s.is_subset(ground.all())) {
        return Err(Error::input(format!("family member {stray:?} outside the ground set")));
    }
    let mut report = AxiomReport::default();

    if !members.contains(&ItemSet::EMPTY) {
        report.violations.push(AxiomViolation::EmptySetMissing);
    }

    // Closure under single-element removal implies closure under all subsets.
    let hereditary = members.iter().find_map(|&member| {
        member
            .iter()
            .map(|e| member.without(e))
            .find(|s| !members.contains(s))
            .map(|subset| AxiomViolation::NotHereditary { member, subset })
    });
    report.violations.extend(hereditary);

    let augmentation = members.iter().find_map(|&larger| {
        members
            .iter()
            .filter(|s| s.len() < larger.len())
            .find(|&&smaller| {
                (larger - smaller)
                    .iter()
                    .all(|e| !members.contains(&smaller.with(e)))
            })
            .map(|&smaller| AxiomViolation::NoAugmentation { larger, smaller })
    });
    report.violations.extend(augmentation);

    Ok(report)
}
