use std::fmt;
use std::str::FromStr;

use crate::centralisation::CentralisationLabel;
use crate::classification::{DerivedClassification, ReferenceCategory, TradFiAnalogy};
use crate::model::facets::nearest_literal;
use crate::model::{
    AssetDescriptor, AssetFunction, DistributionMechanism, Facet, FormOfClaim, IssuerKind,
    LegalClassification, MintingType, RedemptionMechanism, TechnicalStandardKind, YieldSource,
};

/// Value reported for an asset whose dimension is unstated or unassessed.
pub const UNCLASSIFIED: &str = "unclassified";

/// A report axis: an explicit facet or a derived label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    TechnicalStandard,
    Function,
    IssuerKind,
    MintingType,
    YieldSource,
    DistributionMechanism,
    RedemptionMechanism,
    FormOfClaim,
    IsStablecoin,
    Centralisation,
    ReferenceCategory,
    LegalClassification,
    TradFiAnalogy,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown dimension \"{name}\"{}; valid: {}", hint.map(|h| format!(" (did you mean \"{h}\"?)")).unwrap_or_default(), Dimension::names().join(", "))]
pub struct UnknownDimension {
    pub name: String,
    pub hint: Option<&'static str>,
}

impl Dimension {
    pub const ALL: &'static [Dimension] = &[
        Dimension::TechnicalStandard,
        Dimension::Function,
        Dimension::IssuerKind,
        Dimension::MintingType,
        Dimension::YieldSource,
        Dimension::DistributionMechanism,
        Dimension::RedemptionMechanism,
        Dimension::FormOfClaim,
        Dimension::IsStablecoin,
        Dimension::Centralisation,
        Dimension::ReferenceCategory,
        Dimension::LegalClassification,
        Dimension::TradFiAnalogy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::TechnicalStandard => "technical_standard",
            Dimension::Function => "function",
            Dimension::IssuerKind => "issuer_kind",
            Dimension::MintingType => "minting_type",
            Dimension::YieldSource => "yield_source",
            Dimension::DistributionMechanism => "distribution_mechanism",
            Dimension::RedemptionMechanism => "redemption_mechanism",
            Dimension::FormOfClaim => "form_of_claim",
            Dimension::IsStablecoin => "is_stablecoin",
            Dimension::Centralisation => "centralisation",
            Dimension::ReferenceCategory => "reference_category",
            Dimension::LegalClassification => "legal_classification",
            Dimension::TradFiAnalogy => "tradfi_analogy",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|d| d.name()).collect()
    }

    pub fn is_derived(self) -> bool {
        matches!(
            self,
            Dimension::Centralisation
                | Dimension::ReferenceCategory
                | Dimension::LegalClassification
                | Dimension::TradFiAnalogy
        )
    }

    /// Closed value set in report order, without the unclassified marker.
    pub fn universe(self) -> Vec<&'static str> {
        match self {
            Dimension::TechnicalStandard => TechnicalStandardKind::literals(),
            Dimension::Function => AssetFunction::literals(),
            Dimension::IssuerKind => IssuerKind::literals(),
            Dimension::MintingType => MintingType::literals(),
            Dimension::YieldSource => YieldSource::literals(),
            Dimension::DistributionMechanism => DistributionMechanism::literals(),
            Dimension::RedemptionMechanism => RedemptionMechanism::literals(),
            Dimension::FormOfClaim => FormOfClaim::literals(),
            Dimension::IsStablecoin => vec!["false", "true"],
            Dimension::Centralisation => CentralisationLabel::literals(),
            Dimension::ReferenceCategory => ReferenceCategory::literals(),
            Dimension::LegalClassification => LegalClassification::literals(),
            Dimension::TradFiAnalogy => TradFiAnalogy::literals(),
        }
    }

    /// The asset's value on this axis; `None` when unstated or unassessed.
    pub fn value(self, d: &AssetDescriptor, c: &DerivedClassification) -> Option<&'static str> {
        Some(match self {
            Dimension::TechnicalStandard => d.technical_standard.kind().as_str(),
            Dimension::Function => d.function.as_str(),
            Dimension::IssuerKind => d.issuer_kind.as_str(),
            Dimension::MintingType => d.minting_type.as_str(),
            Dimension::YieldSource => d.yield_source.as_str(),
            Dimension::DistributionMechanism => d.distribution_mechanism?.as_str(),
            Dimension::RedemptionMechanism => d.redemption_mechanism.as_str(),
            Dimension::FormOfClaim => d.form_of_claim.as_str(),
            Dimension::IsStablecoin => {
                if d.is_stablecoin {
                    "true"
                } else {
                    "false"
                }
            }
            Dimension::Centralisation => c.centralisation?.as_str(),
            Dimension::ReferenceCategory => c.reference_category.as_str(),
            Dimension::LegalClassification => c.legal_classification?.as_str(),
            Dimension::TradFiAnalogy => c.tradfi_analogy.as_str(),
        })
    }

    /// Position of `value` in the universe; unclassified sorts last.
    pub(crate) fn ordinal(self, value: &str) -> usize {
        self.universe()
            .iter()
            .position(|v| *v == value)
            .unwrap_or(usize::MAX)
    }
}

impl FromStr for Dimension {
    type Err = UnknownDimension;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|d| d.name() == s)
            .ok_or_else(|| UnknownDimension {
                name: s.to_string(),
                hint: nearest_literal(s, &Self::names()),
            })
    }
}

impl serde::Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated dimension list.
pub fn parse_dimensions(list: &str) -> Result<Vec<Dimension>, UnknownDimension> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}
