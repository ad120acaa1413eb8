//! Reference category, legal classification and TradFi analogy.

mod analogy;
mod legal;
mod reference;
mod trace;

use std::fmt;

use serde::Serialize;

pub use analogy::{analogy_rules, tradfi_analogy, TradFiAnalogy};
pub use legal::{
    check_explicit_legal, derive_legal, legal_classification, LegalCheck, LegalTestsUnavailable,
};
pub use reference::{
    reference_category, reference_category_traced, ReferenceCategory, ReferenceSubtype,
};
pub use trace::{DecisionTrace, Predicate, ReplayMismatch, Section, TraceStep};

use crate::centralisation::{evaluate_groups, CentralisationLabel, GroupOutcome, StructuralError};
use crate::model::{AssetDescriptor, LegalClassification};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlagKind {
    /// A printed label disagrees with the derived one.
    FixtureInconsistency,
    /// Explicit legal label disagrees with the one derived from the tests.
    LegalMismatch,
    DistributionUnstated,
    CentralisationUnassessed,
    LegalUnclassified,
}

impl FlagKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FlagKind::FixtureInconsistency => "fixture-inconsistency",
            FlagKind::LegalMismatch => "legal-mismatch",
            FlagKind::DistributionUnstated => "distribution-unstated",
            FlagKind::CentralisationUnassessed => "centralisation-unassessed",
            FlagKind::LegalUnclassified => "legal-unclassified",
        }
    }

    /// Flags that count as data findings for exit-status purposes.
    pub fn is_finding(self) -> bool {
        matches!(
            self,
            FlagKind::FixtureInconsistency | FlagKind::LegalMismatch
        )
    }
}

impl fmt::Display for FlagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FlagKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub kind: FlagKind,
    pub detail: String,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Every derived label for one asset, with the trace that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedClassification {
    pub id: String,
    pub centralisation: Option<CentralisationLabel>,
    pub reference_category: ReferenceCategory,
    pub legal_classification: Option<LegalClassification>,
    pub tradfi_analogy: TradFiAnalogy,
    pub flags: Vec<Flag>,
    pub groups: Vec<GroupOutcome>,
    pub trace: DecisionTrace,
    #[serde(skip)]
    pub legal_check: LegalCheck,
}

impl DerivedClassification {
    pub fn has(&self, kind: FlagKind) -> bool {
        self.flags.iter().any(|f| f.kind == kind)
    }

    pub fn has_findings(&self) -> bool {
        self.flags.iter().any(|f| f.kind.is_finding())
    }

    /// Summary line: `id  centralisation  reference_category  legal  analogy`.
    pub fn summary_line(&self) -> String {
        [
            self.id.as_str(),
            self.centralisation
                .map_or("unclassified", CentralisationLabel::as_str),
            self.reference_category.as_str(),
            self.legal_classification
                .map_or("unclassified", LegalClassification::as_str),
            self.tradfi_analogy.as_str(),
        ]
        .join("  ")
    }
}

pub fn classify(d: &AssetDescriptor) -> Result<DerivedClassification, StructuralError> {
    let mut trace = DecisionTrace::new();
    let centralisation = trace::centralisation_trace(d, &mut trace);
    let groups = match &d.critical_resource_surface {
        Some(s) => {
            let outcomes = evaluate_groups(s, d);
            let label = crate::centralisation::centralisation_label(&outcomes)?;
            debug_assert_eq!(Some(label), centralisation);
            outcomes
        }
        None => Vec::new(),
    };
    let (reference_category, ref_trace) = reference_category_traced(d);
    trace.extend(ref_trace);
    let legal_check = legal::legal_trace(d, &mut trace);
    let tradfi_analogy = analogy::analogy_trace(d, &mut trace);

    let mut out = DerivedClassification {
        id: d.id.clone(),
        centralisation,
        reference_category,
        legal_classification: legal_check.authoritative(),
        tradfi_analogy,
        flags: Vec::new(),
        groups,
        trace,
        legal_check,
    };
    out.flags = flags_for(d, &out);
    Ok(out)
}

fn flags_for(d: &AssetDescriptor, c: &DerivedClassification) -> Vec<Flag> {
    let mut flags = Vec::new();
    let mut inconsistent = |field: &str, published: &str, derived: &str| {
        if published != derived {
            flags.push(Flag {
                kind: FlagKind::FixtureInconsistency,
                detail: format!("{field}: published {published}, derived {derived}"),
            });
        }
    };
    if let Some(p) = &d.published {
        if let Some(v) = p.centralisation {
            let derived = c.centralisation.map_or("unclassified", |l| l.as_str());
            inconsistent("centralisation", v.as_str(), derived);
        }
        if let Some(v) = p.reference_category {
            inconsistent(
                "reference_category",
                v.as_str(),
                c.reference_category.as_str(),
            );
        }
        if let Some(v) = p.legal_classification {
            let derived = c
                .legal_classification
                .map_or("unclassified", |l| l.as_str());
            inconsistent("legal_classification", v.as_str(), derived);
        }
        if let Some(v) = p.tradfi_analogy {
            inconsistent("tradfi_analogy", v.as_str(), c.tradfi_analogy.as_str());
        }
    }
    match c.legal_check {
        LegalCheck::Mismatch { explicit, derived } => flags.push(Flag {
            kind: FlagKind::LegalMismatch,
            detail: format!("explicit {explicit}, derived {derived}"),
        }),
        LegalCheck::Unclassified => flags.push(Flag {
            kind: FlagKind::LegalUnclassified,
            detail: "no explicit label and no test inputs".to_string(),
        }),
        _ => {}
    }
    if d.distribution_mechanism.is_none() {
        flags.push(Flag {
            kind: FlagKind::DistributionUnstated,
            detail: format!("yield_source is {}", d.yield_source),
        });
    }
    if d.critical_resource_surface.is_none() {
        flags.push(Flag {
            kind: FlagKind::CentralisationUnassessed,
            detail: "critical_resource_surface is null".to_string(),
        });
    }
    flags
}
