use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::facets::{
    AssetFunction, DistributionMechanism, FormOfClaim, IssuerKind, LegalClassification,
    MintingType, RedemptionMechanism, TechnicalStandard, YieldSource,
};
use super::validate::Diagnostic;
use crate::centralisation::{CentralisationLabel, CriticalResourceSurface};
use crate::classification::{ReferenceCategory, TradFiAnalogy};
use crate::MarketCap;

/// Reference or redemption asset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssetRef {
    pub symbol: String,
    pub is_fiat: bool,
}

impl AssetRef {
    pub fn new(symbol: &str, is_fiat: bool) -> Self {
        AssetRef {
            symbol: symbol.to_string(),
            is_fiat,
        }
    }

    pub fn symbol_is_valid(symbol: &str) -> bool {
        !symbol.is_empty() && !symbol.chars().any(char::is_whitespace)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoweyProngs {
    pub investment_of_money: bool,
    pub common_enterprise: bool,
    pub expectation_of_profits: bool,
    pub efforts_of_others: bool,
}

impl HoweyProngs {
    pub fn met(&self) -> bool {
        self.investment_of_money
            && self.common_enterprise
            && self.expectation_of_profits
            && self.efforts_of_others
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MifidProngs {
    pub profits_or_repayment: bool,
    pub claim_against_identifiable_issuer: bool,
}

impl MifidProngs {
    pub fn met(&self) -> bool {
        self.profits_or_repayment && self.claim_against_identifiable_issuer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AifProngs {
    pub pooled_risk_return: bool,
    pub defined_investment_policy: bool,
    pub investor_benefit: bool,
}

impl AifProngs {
    pub fn met(&self) -> bool {
        self.pooled_risk_return && self.defined_investment_policy && self.investor_benefit
    }
}

/// Boolean prongs of the Howey, MiFID and ART-AIF tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalTestInputs {
    pub howey: HoweyProngs,
    pub mifid: MifidProngs,
    pub aif: AifProngs,
}

impl LegalTestInputs {
    /// Builds inputs from a 9-bit mask in prong declaration order
    /// (howey x4, mifid x2, aif x3), least significant bit first.
    pub fn from_bits(bits: u16) -> Self {
        let b = |i: u16| bits & (1 << i) != 0;
        LegalTestInputs {
            howey: HoweyProngs {
                investment_of_money: b(0),
                common_enterprise: b(1),
                expectation_of_profits: b(2),
                efforts_of_others: b(3),
            },
            mifid: MifidProngs {
                profits_or_repayment: b(4),
                claim_against_identifiable_issuer: b(5),
            },
            aif: AifProngs {
                pooled_risk_return: b(6),
                defined_investment_policy: b(7),
                investor_benefit: b(8),
            },
        }
    }
}

/// Market metadata; kept for report colouring, never used for classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub market_cap_usd: MarketCap,
    pub snapshot_date: NaiveDate,
}

/// Derived labels as printed in a source document, kept for cross-checking.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedLabels {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centralisation: Option<CentralisationLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_category: Option<ReferenceCategory>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal_classification: Option<LegalClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tradfi_analogy: Option<TradFiAnalogy>,
}

/// One crypto-asset's explicit taxonomy features.
///
/// `distribution_mechanism = None` means the mechanism was not stated;
/// `critical_resource_surface = None` means control was not assessed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetDescriptor {
    pub id: String,
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub technical_standard: TechnicalStandard,
    pub function: AssetFunction,
    pub issuer_kind: IssuerKind,
    pub minting_type: MintingType,
    pub yield_source: YieldSource,
    pub distribution_mechanism: Option<DistributionMechanism>,
    pub redemption_mechanism: RedemptionMechanism,
    pub form_of_claim: FormOfClaim,
    pub reference: Option<AssetRef>,
    pub is_stablecoin: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_legal_classification: Option<LegalClassification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legal_test_inputs: Option<LegalTestInputs>,
    pub critical_resource_surface: Option<CriticalResourceSurface>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<PublishedLabels>,
}

impl AssetDescriptor {
    /// Minimal descriptor: no yield, no reference, no claim, empty surface.
    pub fn bare(id: &str, symbol: &str) -> Self {
        AssetDescriptor {
            id: id.to_string(),
            symbol: symbol.to_string(),
            name: None,
            technical_standard: TechnicalStandard::Native,
            function: AssetFunction::Utility,
            issuer_kind: IssuerKind::None,
            minting_type: MintingType::Consensus,
            yield_source: YieldSource::None,
            distribution_mechanism: Some(DistributionMechanism::None),
            redemption_mechanism: RedemptionMechanism::None,
            form_of_claim: FormOfClaim::NoClaim,
            reference: None,
            is_stablecoin: false,
            explicit_legal_classification: None,
            legal_test_inputs: None,
            critical_resource_surface: Some(CriticalResourceSurface::new()),
            metadata: None,
            published: None,
        }
    }

    pub fn has_reference(&self) -> bool {
        self.reference.is_some()
    }

    pub fn market_cap(&self) -> Option<MarketCap> {
        self.metadata.as_ref().map(|m| m.market_cap_usd)
    }

    /// Cross-field invariant violations, paths relative to the record.
    pub fn invariant_violations(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.id.trim().is_empty() {
            out.push(Diagnostic::new("id", &self.id, "id must be non-empty"));
        }
        if !AssetRef::symbol_is_valid(&self.symbol) {
            out.push(Diagnostic::new(
                "symbol",
                &self.symbol,
                "symbol must be non-empty without whitespace",
            ));
        }
        if let Some(r) = &self.reference {
            if !AssetRef::symbol_is_valid(&r.symbol) {
                out.push(Diagnostic::new(
                    "reference.symbol",
                    &r.symbol,
                    "symbol must be non-empty without whitespace",
                ));
            }
        }
        if let Some(dist) = self.distribution_mechanism {
            let no_yield = self.yield_source == YieldSource::None;
            let no_dist = dist == DistributionMechanism::None;
            if no_yield != no_dist {
                out.push(Diagnostic::new(
                    "distribution_mechanism",
                    dist.as_str(),
                    &format!(
                        "yield/distribution mismatch: yield_source is {}",
                        self.yield_source
                    ),
                ));
            }
        }
        if self.redemption_mechanism != RedemptionMechanism::None && self.reference.is_none() {
            out.push(Diagnostic::new(
                "reference",
                "null",
                &format!(
                    "redemption requires reference: redemption_mechanism is {}",
                    self.redemption_mechanism
                ),
            ));
        }
        if self.is_stablecoin && self.reference.is_none() {
            out.push(Diagnostic::new(
                "reference",
                "null",
                "stablecoin requires reference",
            ));
        }
        if self.issuer_kind == IssuerKind::None
            && !matches!(
                self.minting_type,
                MintingType::Consensus | MintingType::PreMined
            )
        {
            out.push(Diagnostic::new(
                "minting_type",
                self.minting_type.as_str(),
                "issuer_kind none requires consensus or pre_mined minting",
            ));
        }
        if let Some(m) = &self.metadata {
            if !(m.market_cap_usd.is_finite() && m.market_cap_usd >= 0.0) {
                out.push(Diagnostic::new(
                    "metadata.market_cap_usd",
                    &m.market_cap_usd.to_string(),
                    "market cap must be a finite non-negative number",
                ));
            }
        }
        out
    }
}
