//! Minimum Decentralisation Test over the critical-resource surface.
//!
//! A sub-dimension fails when any of its resources can be controlled by a
//! single party (`j = 1`). Sub-dimensions aggregate into six groups; the
//! asset label is derived from the group statuses alone.

mod ownership;
mod surface;

use serde::Serialize;

use crate::model::facets::{facet, Facet};
use crate::model::{AssetDescriptor, RedemptionMechanism, YieldSource};

pub use ownership::{
    assess_ownership, ownership_parties, OwnershipAssessment, OwnershipError, OWNERSHIP_THRESHOLD,
    TOP_HOLDERS,
};
pub use surface::{CriticalResourceSurface, Group, PartyCount, ResourceEntries, SubDimension};

facet! {
    GroupStatus, "group_status" {
        Pass => "pass",
        Fail => "fail",
        NotApplicable => "not_applicable",
    }
}

facet! {
    /// Asset-level centralisation. Ordered from least to most centralised.
    CentralisationLabel, "centralisation" {
        Decentralised => "decentralised",
        Hybrid => "hybrid",
        Centralised => "centralised",
    }
}

/// Outcome of one functional group. `failing` is non-empty iff `status` is fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupOutcome {
    pub group: Group,
    pub status: GroupStatus,
    pub failing: Vec<(SubDimension, String)>,
}

impl GroupOutcome {
    pub fn not_applicable(group: Group) -> Self {
        GroupOutcome {
            group,
            status: GroupStatus::NotApplicable,
            failing: Vec::new(),
        }
    }

    fn from_failing(group: Group, failing: Vec<(SubDimension, String)>) -> Self {
        let status = if failing.is_empty() {
            GroupStatus::Pass
        } else {
            GroupStatus::Fail
        };
        GroupOutcome {
            group,
            status,
            failing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructuralError {
    #[error("group outcomes missing group {0}")]
    MissingGroup(Group),
    #[error("group {0} appears more than once in outcomes")]
    DuplicateGroup(Group),
}

/// False iff some resource is controlled by exactly one party.
pub fn subdimension_passes(entries: &ResourceEntries) -> bool {
    !entries.values().any(|j| j.is_some_and(|n| n.get() == 1))
}

/// Whether `group` takes part in the label for this descriptor.
pub fn group_applicable(
    group: Group,
    surface: &CriticalResourceSurface,
    d: &AssetDescriptor,
) -> bool {
    match group {
        Group::Governance | Group::Minting => true,
        Group::Yield => d.yield_source != YieldSource::None,
        Group::Redemption => {
            d.reference.is_some() || d.redemption_mechanism != RedemptionMechanism::None
        }
        Group::Market | Group::Community => surface.group_has_entries(group),
    }
}

/// One outcome per group, in group order.
pub fn evaluate_groups(
    surface: &CriticalResourceSurface,
    d: &AssetDescriptor,
) -> Vec<GroupOutcome> {
    Group::ALL
        .iter()
        .map(|&group| {
            if !group_applicable(group, surface, d) {
                return GroupOutcome::not_applicable(group);
            }
            let failing = group
                .subdimensions()
                .iter()
                .filter_map(|&sub| surface.entries(sub).map(|e| (sub, e)))
                .flat_map(|(sub, entries)| {
                    entries
                        .iter()
                        .filter(|(_, j)| j.is_some_and(|n| n.get() == 1))
                        .map(move |(r, _)| (sub, r.clone()))
                })
                .collect();
            GroupOutcome::from_failing(group, failing)
        })
        .collect()
}

/// Statuses indexed by group ordinal; rejects missing or repeated groups.
pub fn status_vector(outcomes: &[GroupOutcome]) -> Result<[GroupStatus; 6], StructuralError> {
    let mut slots: [Option<GroupStatus>; 6] = [None; 6];
    for o in outcomes {
        let slot = &mut slots[o.group.ordinal()];
        if slot.is_some() {
            return Err(StructuralError::DuplicateGroup(o.group));
        }
        *slot = Some(o.status);
    }
    let mut out = [GroupStatus::Pass; 6];
    for (i, g) in Group::ALL.iter().enumerate() {
        out[i] = slots[i].ok_or(StructuralError::MissingGroup(*g))?;
    }
    Ok(out)
}

/// Decentralised if every applicable group passes; centralised if every
/// applicable core group fails (and at least one core group applies);
/// hybrid otherwise.
pub fn centralisation_label(
    outcomes: &[GroupOutcome],
) -> Result<CentralisationLabel, StructuralError> {
    Ok(label_from_statuses(&status_vector(outcomes)?))
}

pub fn label_from_statuses(statuses: &[GroupStatus; 6]) -> CentralisationLabel {
    let all_pass = statuses.iter().all(|s| *s != GroupStatus::Fail);
    if all_pass {
        return CentralisationLabel::Decentralised;
    }
    let core: Vec<GroupStatus> = Group::ALL
        .iter()
        .zip(statuses)
        .filter(|(g, s)| g.is_core() && **s != GroupStatus::NotApplicable)
        .map(|(_, s)| *s)
        .collect();
    if !core.is_empty() && core.iter().all(|s| *s == GroupStatus::Fail) {
        CentralisationLabel::Centralised
    } else {
        CentralisationLabel::Hybrid
    }
}
