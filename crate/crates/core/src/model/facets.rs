//! Closed facet vocabularies.
//!
//! Every taxonomy dimension is a closed set of lower_snake_case literals.
//! Parsing an unknown literal fails with an [`UnknownLiteral`] that carries
//! the nearest valid literal as a hint.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A closed vocabulary of literals with a stable ordering.
pub trait Facet: Sized + Copy + Eq + 'static {
    /// Dimension name as used in descriptor files and reports.
    const DIMENSION: &'static str;

    fn universe() -> &'static [Self];

    fn literal(self) -> &'static str;

    fn literals() -> Vec<&'static str> {
        Self::universe().iter().map(|v| v.literal()).collect()
    }

    fn parse_literal(s: &str) -> Result<Self, UnknownLiteral> {
        Self::universe()
            .iter()
            .copied()
            .find(|v| v.literal() == s)
            .ok_or_else(|| UnknownLiteral::new(Self::DIMENSION, s, &Self::literals()))
    }

    /// Position in the universe; used for report ordering.
    fn ordinal(self) -> usize {
        Self::universe()
            .iter()
            .position(|v| *v == self)
            .expect("facet value is in its own universe")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {dimension} literal \"{value}\"{}", hint_suffix(.hint))]
pub struct UnknownLiteral {
    pub dimension: &'static str,
    pub value: String,
    pub hint: Option<&'static str>,
}

fn hint_suffix(hint: &Option<&'static str>) -> String {
    match hint {
        Some(h) => format!(" (did you mean \"{h}\"?)"),
        None => String::new(),
    }
}

impl UnknownLiteral {
    pub fn new(dimension: &'static str, value: &str, candidates: &[&'static str]) -> Self {
        UnknownLiteral {
            dimension,
            value: value.to_string(),
            hint: nearest_literal(value, candidates),
        }
    }
}

/// Closest candidate by edit distance, if it is plausibly a typo.
pub fn nearest_literal(value: &str, candidates: &[&'static str]) -> Option<&'static str> {
    let (best, dist) = candidates
        .iter()
        .map(|c| (*c, strsim::levenshtein(value, c)))
        .min_by_key(|(_, d)| *d)?;
    let budget = (best.len().max(value.len()) / 3).max(2);
    (dist <= budget).then_some(best)
}

macro_rules! facet {
    (
        $(#[$meta:meta])*
        $name:ident, $dim:literal {
            $( $(#[$vmeta:meta])* $variant:ident => $lit:literal ),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $( $(#[$vmeta])* $variant ),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub const fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $lit),+
                }
            }
        }

        impl $crate::model::facets::Facet for $name {
            const DIMENSION: &'static str = $dim;

            fn universe() -> &'static [Self] {
                Self::ALL
            }

            fn literal(self) -> &'static str {
                self.as_str()
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::model::facets::UnknownLiteral;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$name as $crate::model::facets::Facet>::parse_literal(s)
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> ::serde::Deserialize<'de> for $name {
            fn deserialize<D: ::serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = <String as ::serde::Deserialize>::deserialize(d)?;
                s.parse().map_err(::serde::de::Error::custom)
            }
        }
    };
}

pub(crate) use facet;

facet! {
    /// Technical standard without the free-form label of `other`.
    TechnicalStandardKind, "technical_standard" {
        Native => "native",
        Erc20 => "erc20",
        Other => "other",
    }
}

facet! {
    AssetFunction, "function" {
        Governance => "governance",
        Utility => "utility",
        Security => "security",
        Other => "other",
    }
}

facet! {
    IssuerKind, "issuer_kind" {
        Centralised => "centralised",
        Protocol => "protocol",
        None => "none",
    }
}

facet! {
    MintingType, "minting_type" {
        Consensus => "consensus",
        LockAndMint => "lock_and_mint",
        Staking => "staking",
        Wrapped => "wrapped",
        AlgorithmicBurnMint => "algorithmic_burn_mint",
        EmissionGovernance => "emission_governance",
        PreMined => "pre_mined",
        Nft => "nft",
    }
}

facet! {
    YieldSource, "yield_source" {
        LendingBorrowing => "lending_borrowing",
        LiquidityFees => "liquidity_fees",
        StakingRewards => "staking_rewards",
        RevenueSharing => "revenue_sharing",
        IncentiveEmissions => "incentive_emissions",
        BurnMintEquilibria => "burn_mint_equilibria",
        None => "none",
    }
}

facet! {
    DistributionMechanism, "distribution_mechanism" {
        QuantityAccrual => "quantity_accrual",
        ValueAccrual => "value_accrual",
        PriceAccrual => "price_accrual",
        ExternalRedistribution => "external_redistribution",
        None => "none",
    }
}

facet! {
    RedemptionMechanism, "redemption_mechanism" {
        OffChainIssuer => "off_chain_issuer",
        BurnToUnlock => "burn_to_unlock",
        BridgeBurnRelease => "bridge_burn_release",
        SecondaryMarket => "secondary_market",
        QueuedWithdrawal => "queued_withdrawal",
        ProtocolPar => "protocol_par",
        ClaimFromPool => "claim_from_pool",
        None => "none",
    }
}

facet! {
    /// The six claim positions. `RemReserve` carries no proceeds direction.
    FormOfClaim, "form_of_claim" {
        PersonamIssuerToIssuer => "personam_issuer_to_issuer",
        PersonamIssuerToHolders => "personam_issuer_to_holders",
        PersonamReserveToIssuer => "personam_reserve_to_issuer",
        PersonamReserveToHolders => "personam_reserve_to_holders",
        RemReserve => "rem_reserve",
        NoClaim => "no_claim",
    }
}

facet! {
    LegalClassification, "legal_classification" {
        SecurityOrFinancialInstrument => "security_or_financial_instrument",
        StableValueToken => "stable_value_token",
        FundAif => "fund_aif",
        OtherCryptoAsset => "other_crypto_asset",
    }
}

/// `native`, `erc20`, or `other` with an optional free-form label
/// (ERC-721, ERC-1400, HTS, ...). Encoded as `"other"` or `"other:<label>"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TechnicalStandard {
    Native,
    Erc20,
    Other(Option<String>),
}

impl TechnicalStandard {
    pub fn kind(&self) -> TechnicalStandardKind {
        match self {
            TechnicalStandard::Native => TechnicalStandardKind::Native,
            TechnicalStandard::Erc20 => TechnicalStandardKind::Erc20,
            TechnicalStandard::Other(_) => TechnicalStandardKind::Other,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            TechnicalStandard::Other(label) => label.as_deref(),
            _ => None,
        }
    }
}

impl FromStr for TechnicalStandard {
    type Err = UnknownLiteral;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(label) = s.strip_prefix("other:") {
            if label.trim().is_empty() {
                return Err(UnknownLiteral {
                    dimension: TechnicalStandardKind::DIMENSION,
                    value: s.to_string(),
                    hint: Some("other"),
                });
            }
            return Ok(TechnicalStandard::Other(Some(label.to_string())));
        }
        Ok(match TechnicalStandardKind::parse_literal(s)? {
            TechnicalStandardKind::Native => TechnicalStandard::Native,
            TechnicalStandardKind::Erc20 => TechnicalStandard::Erc20,
            TechnicalStandardKind::Other => TechnicalStandard::Other(None),
        })
    }
}

impl fmt::Display for TechnicalStandard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TechnicalStandard::Other(Some(label)) => write!(f, "other:{label}"),
            other => f.write_str(other.kind().as_str()),
        }
    }
}

impl Serialize for TechnicalStandard {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TechnicalStandard {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One closed vocabulary, as returned by [`facet_universe`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetVocabulary {
    pub dimension: &'static str,
    pub values: Vec<&'static str>,
}

/// All explicit facet vocabularies in declaration order.
pub fn facet_universe() -> Vec<FacetVocabulary> {
    fn vocab<F: Facet>() -> FacetVocabulary {
        FacetVocabulary {
            dimension: F::DIMENSION,
            values: F::literals(),
        }
    }
    vec![
        vocab::<TechnicalStandardKind>(),
        vocab::<AssetFunction>(),
        vocab::<IssuerKind>(),
        vocab::<MintingType>(),
        vocab::<YieldSource>(),
        vocab::<DistributionMechanism>(),
        vocab::<RedemptionMechanism>(),
        vocab::<FormOfClaim>(),
        vocab::<LegalClassification>(),
    ]
}
