//! Replayable decision traces.
//!
//! Every derived dimension is computed by evaluating predicates in a fixed
//! order. Each evaluated predicate is recorded with its result, and the step
//! that decides a dimension carries the verdict.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::centralisation::{
    evaluate_groups, group_applicable, subdimension_passes, CentralisationLabel, Group,
    GroupStatus, SubDimension,
};
use crate::model::{
    AssetDescriptor, AssetFunction, DistributionMechanism, FormOfClaim, IssuerKind, MintingType,
    RedemptionMechanism, YieldSource,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    Centralisation,
    Reference,
    Legal,
    Analogy,
}

impl Section {
    pub fn as_str(self) -> &'static str {
        match self {
            Section::Centralisation => "centralisation",
            Section::Reference => "reference",
            Section::Legal => "legal",
            Section::Analogy => "analogy",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An atomic, re-evaluable test against a descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    SurfaceAssessed,
    GroupApplicable(Group),
    SubDimensionPasses(SubDimension),
    AllApplicableGroupsPass,
    AllApplicableCoreGroupsFail,
    ReferencePresent,
    ReferenceIsFiat,
    IsStablecoin,
    FunctionIs(AssetFunction),
    IssuerIs(IssuerKind),
    MintingIs(MintingType),
    YieldSourceIs(YieldSource),
    DistributionIs(DistributionMechanism),
    RedemptionIs(RedemptionMechanism),
    RedemptionIn(&'static [RedemptionMechanism]),
    FormOfClaimIs(FormOfClaim),
    LegalInputsPresent,
    HoweyMet,
    MifidMet,
    AifMet,
    ExplicitLegalPresent,
    Not(Box<Predicate>),
    Otherwise,
}

impl Predicate {
    pub fn negate(p: Predicate) -> Predicate {
        Predicate::Not(Box::new(p))
    }

    pub fn eval(&self, d: &AssetDescriptor) -> bool {
        use Predicate::*;
        match self {
            SurfaceAssessed => d.critical_resource_surface.is_some(),
            GroupApplicable(g) => d
                .critical_resource_surface
                .as_ref()
                .is_some_and(|s| group_applicable(*g, s, d)),
            SubDimensionPasses(sub) => d
                .critical_resource_surface
                .as_ref()
                .and_then(|s| s.entries(*sub))
                .is_none_or(subdimension_passes),
            AllApplicableGroupsPass => {
                group_statuses(d).is_some_and(|st| st.iter().all(|(_, s)| *s != GroupStatus::Fail))
            }
            AllApplicableCoreGroupsFail => group_statuses(d).is_some_and(|st| {
                let core: Vec<_> = st
                    .iter()
                    .filter(|(g, s)| g.is_core() && *s != GroupStatus::NotApplicable)
                    .collect();
                !core.is_empty() && core.iter().all(|(_, s)| *s == GroupStatus::Fail)
            }),
            ReferencePresent => d.reference.is_some(),
            ReferenceIsFiat => d.reference.as_ref().is_some_and(|r| r.is_fiat),
            IsStablecoin => d.is_stablecoin,
            FunctionIs(f) => d.function == *f,
            IssuerIs(i) => d.issuer_kind == *i,
            MintingIs(m) => d.minting_type == *m,
            YieldSourceIs(y) => d.yield_source == *y,
            DistributionIs(m) => d.distribution_mechanism == Some(*m),
            RedemptionIs(r) => d.redemption_mechanism == *r,
            RedemptionIn(set) => set.contains(&d.redemption_mechanism),
            FormOfClaimIs(c) => d.form_of_claim == *c,
            LegalInputsPresent => d.legal_test_inputs.is_some(),
            HoweyMet => d.legal_test_inputs.is_some_and(|t| t.howey.met()),
            MifidMet => d.legal_test_inputs.is_some_and(|t| t.mifid.met()),
            AifMet => d.legal_test_inputs.is_some_and(|t| t.aif.met()),
            ExplicitLegalPresent => d.explicit_legal_classification.is_some(),
            Not(p) => !p.eval(d),
            Otherwise => true,
        }
    }
}

fn group_statuses(d: &AssetDescriptor) -> Option<Vec<(Group, GroupStatus)>> {
    let s = d.critical_resource_surface.as_ref()?;
    Some(
        evaluate_groups(s, d)
            .into_iter()
            .map(|o| (o.group, o.status))
            .collect(),
    )
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Predicate::*;
        match self {
            SurfaceAssessed => write!(f, "critical-resource surface assessed"),
            GroupApplicable(g) => write!(f, "{g} group applicable"),
            SubDimensionPasses(s) => write!(f, "{s} has no single-party resource"),
            AllApplicableGroupsPass => write!(f, "all applicable groups pass"),
            AllApplicableCoreGroupsFail => write!(f, "all applicable core groups fail"),
            ReferencePresent => write!(f, "reference present"),
            ReferenceIsFiat => write!(f, "reference is fiat"),
            IsStablecoin => write!(f, "stablecoin"),
            FunctionIs(x) => write!(f, "function={x}"),
            IssuerIs(x) => write!(f, "issuer_kind={x}"),
            MintingIs(x) => write!(f, "minting={x}"),
            YieldSourceIs(x) => write!(f, "yield_source={x}"),
            DistributionIs(x) => write!(f, "distribution={x}"),
            RedemptionIs(x) => write!(f, "redemption={x}"),
            RedemptionIn(set) => {
                let names: Vec<_> = set.iter().map(|r| r.as_str()).collect();
                write!(f, "redemption in {{{}}}", names.join(","))
            }
            FormOfClaimIs(x) => write!(f, "form_of_claim={x}"),
            LegalInputsPresent => write!(f, "legal test inputs present"),
            HoweyMet => write!(f, "howey prongs all met"),
            MifidMet => write!(f, "mifid prongs all met"),
            AifMet => write!(f, "aif prongs all met"),
            ExplicitLegalPresent => write!(f, "explicit legal classification present"),
            Not(p) => match p.as_ref() {
                ReferencePresent => write!(f, "reference absent"),
                IsStablecoin => write!(f, "not stablecoin"),
                YieldSourceIs(x) => write!(f, "yield_source!={x}"),
                other => write!(f, "not ({other})"),
            },
            Otherwise => write!(f, "otherwise"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub section: Section,
    pub rule: String,
    pub predicate: Predicate,
    pub result: bool,
    /// Set on the step that decided the section.
    pub verdict: Option<String>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] rule {}: {} → ",
            self.section, self.rule, self.predicate
        )?;
        match &self.verdict {
            Some(v) => f.write_str(v),
            None => write!(f, "{}", self.result),
        }
    }
}

impl Serialize for TraceStep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TraceStep", 5)?;
        st.serialize_field("section", self.section.as_str())?;
        st.serialize_field("rule", &self.rule)?;
        st.serialize_field("predicate", &self.predicate.to_string())?;
        st.serialize_field("result", &self.result)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace step {index} ({predicate}) recorded {recorded} but replays as {replayed}")]
pub struct ReplayMismatch {
    pub index: usize,
    pub predicate: String,
    pub recorded: bool,
    pub replayed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DecisionTrace {
    steps: Vec<TraceStep>,
}

impl DecisionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn push(&mut self, step: TraceStep) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: DecisionTrace) {
        self.steps.extend(other.steps);
    }

    /// Verdict recorded for a section, if it was decided.
    pub fn verdict(&self, section: Section) -> Option<&str> {
        self.steps
            .iter()
            .rev()
            .find(|s| s.section == section && s.verdict.is_some())
            .and_then(|s| s.verdict.as_deref())
    }

    pub fn section(&self, section: Section) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(move |s| s.section == section)
    }

    /// Re-evaluates every recorded predicate against `d`.
    pub fn replay(&self, d: &AssetDescriptor) -> Result<(), ReplayMismatch> {
        for (index, step) in self.steps.iter().enumerate() {
            let replayed = step.predicate.eval(d);
            if replayed != step.result {
                return Err(ReplayMismatch {
                    index,
                    predicate: step.predicate.to_string(),
                    recorded: step.result,
                    replayed,
                });
            }
        }
        Ok(())
    }

    pub fn lines(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for DecisionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// First-match rule evaluation with short-circuiting conjunctions.
pub(crate) struct RuleRunner<'a> {
    d: &'a AssetDescriptor,
    section: Section,
    trace: &'a mut DecisionTrace,
}

impl<'a> RuleRunner<'a> {
    pub(crate) fn new(
        d: &'a AssetDescriptor,
        section: Section,
        trace: &'a mut DecisionTrace,
    ) -> Self {
        RuleRunner { d, section, trace }
    }

    /// Records a standalone observation (no verdict).
    pub(crate) fn observe(&mut self, rule: &str, predicate: Predicate) -> bool {
        let result = predicate.eval(self.d);
        self.trace.push(TraceStep {
            section: self.section,
            rule: rule.to_string(),
            predicate,
            result,
            verdict: None,
        });
        result
    }

    /// Evaluates the conjunction `preds`; if all hold, the last step carries
    /// `verdict` and `true` is returned.
    pub(crate) fn rule(&mut self, rule: &str, preds: &[Predicate], verdict: &str) -> bool {
        debug_assert!(!preds.is_empty());
        for (i, p) in preds.iter().enumerate() {
            let result = p.eval(self.d);
            let decides = result && i + 1 == preds.len();
            self.trace.push(TraceStep {
                section: self.section,
                rule: rule.to_string(),
                predicate: p.clone(),
                result,
                verdict: decides.then(|| verdict.to_string()),
            });
            if !result {
                return false;
            }
        }
        true
    }
}

/// Centralisation trace: surface presence, group applicability, MDT per
/// populated sub-dimension, then the label rules.
pub(crate) fn centralisation_trace(
    d: &AssetDescriptor,
    trace: &mut DecisionTrace,
) -> Option<CentralisationLabel> {
    let mut run = RuleRunner::new(d, Section::Centralisation, trace);
    if !run.observe("surface", Predicate::SurfaceAssessed) {
        if let Some(last) = run.trace.steps.last_mut() {
            last.verdict = Some("unclassified".to_string());
        }
        return None;
    }
    let surface = d.critical_resource_surface.as_ref()?;
    for group in Group::ALL {
        if !run.observe("applicability", Predicate::GroupApplicable(*group)) {
            continue;
        }
        for sub in group.subdimensions() {
            if surface.entries(*sub).is_some_and(|e| !e.is_empty()) {
                run.observe("mdt", Predicate::SubDimensionPasses(*sub));
            }
        }
    }
    let label = if run.rule(
        "label-1",
        &[Predicate::AllApplicableGroupsPass],
        CentralisationLabel::Decentralised.as_str(),
    ) {
        CentralisationLabel::Decentralised
    } else if run.rule(
        "label-2",
        &[Predicate::AllApplicableCoreGroupsFail],
        CentralisationLabel::Centralised.as_str(),
    ) {
        CentralisationLabel::Centralised
    } else {
        run.rule(
            "label-3",
            &[Predicate::Otherwise],
            CentralisationLabel::Hybrid.as_str(),
        );
        CentralisationLabel::Hybrid
    };
    Some(label)
}
