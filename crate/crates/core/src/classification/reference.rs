use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::trace::{DecisionTrace, Predicate, RuleRunner, Section};
use crate::model::facets::{facet, Facet, UnknownLiteral};
use crate::model::{AssetDescriptor, IssuerKind, MintingType, RedemptionMechanism};

facet! {
    ReferenceSubtype, "reference_subtype" {
        Wrapped => "wrapped",
        LiquidStaking => "liquid_staking",
        Other => "other",
    }
}

/// Reference-asset category. Encoded as `referenced_non_stablecoin/<subtype>`
/// for the non-stablecoin case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReferenceCategory {
    NoReference,
    EMoneyToken,
    AssetReferencedToken,
    ReferencedNonStablecoin(ReferenceSubtype),
}

impl ReferenceCategory {
    pub const ALL: &'static [ReferenceCategory] = &[
        ReferenceCategory::NoReference,
        ReferenceCategory::EMoneyToken,
        ReferenceCategory::AssetReferencedToken,
        ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::Wrapped),
        ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::LiquidStaking),
        ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::Other),
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            ReferenceCategory::NoReference => "no_reference",
            ReferenceCategory::EMoneyToken => "e_money_token",
            ReferenceCategory::AssetReferencedToken => "asset_referenced_token",
            ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::Wrapped) => {
                "referenced_non_stablecoin/wrapped"
            }
            ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::LiquidStaking) => {
                "referenced_non_stablecoin/liquid_staking"
            }
            ReferenceCategory::ReferencedNonStablecoin(ReferenceSubtype::Other) => {
                "referenced_non_stablecoin/other"
            }
        }
    }

    pub fn subtype(self) -> Option<ReferenceSubtype> {
        match self {
            ReferenceCategory::ReferencedNonStablecoin(s) => Some(s),
            _ => None,
        }
    }
}

impl Facet for ReferenceCategory {
    const DIMENSION: &'static str = "reference_category";

    fn universe() -> &'static [Self] {
        Self::ALL
    }

    fn literal(self) -> &'static str {
        self.as_str()
    }
}

impl FromStr for ReferenceCategory {
    type Err = UnknownLiteral;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_literal(s)
    }
}

impl fmt::Display for ReferenceCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ReferenceCategory {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ReferenceCategory {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

pub fn reference_category(d: &AssetDescriptor) -> ReferenceCategory {
    reference_category_traced(d).0
}

pub fn reference_category_traced(d: &AssetDescriptor) -> (ReferenceCategory, DecisionTrace) {
    use Predicate::*;
    use ReferenceCategory::*;
    let rules: [(&str, Vec<Predicate>, ReferenceCategory); 6] = [
        ("1", vec![Predicate::negate(ReferencePresent)], NoReference),
        (
            "2",
            vec![
                IsStablecoin,
                ReferenceIsFiat,
                IssuerIs(IssuerKind::Centralised),
                RedemptionIs(RedemptionMechanism::OffChainIssuer),
            ],
            EMoneyToken,
        ),
        ("3", vec![IsStablecoin], AssetReferencedToken),
        (
            "4",
            vec![MintingIs(MintingType::Wrapped)],
            ReferencedNonStablecoin(ReferenceSubtype::Wrapped),
        ),
        (
            "5",
            vec![MintingIs(MintingType::Staking)],
            ReferencedNonStablecoin(ReferenceSubtype::LiquidStaking),
        ),
        (
            "6",
            vec![Otherwise],
            ReferencedNonStablecoin(ReferenceSubtype::Other),
        ),
    ];
    let mut trace = DecisionTrace::new();
    let mut run = RuleRunner::new(d, Section::Reference, &mut trace);
    for (id, preds, category) in rules {
        if run.rule(id, &preds, category.as_str()) {
            return (category, trace);
        }
    }
    unreachable!("rule 6 always matches")
}
