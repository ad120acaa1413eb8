use std::collections::BTreeMap;
use std::num::NonZeroU32;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::model::facets::facet;

facet! {
    /// Control sub-dimensions of the critical-resource table.
    SubDimension, "sub_dimension" {
        GovRuleChange => "gov_rule_change",
        GovVoting => "gov_voting",
        MintAuthority => "mint_authority",
        MintDataParam => "mint_data_param",
        YieldRewardPolicy => "yield_reward_policy",
        YieldOperatorDistribution => "yield_operator_distribution",
        RedReserve => "red_reserve",
        RedMechanism => "red_mechanism",
        MarketOwnership => "market_ownership",
        MarketExchange => "market_exchange",
        CommunityTransparency => "community_transparency",
    }
}

facet! {
    /// Functional groups the sub-dimensions aggregate into.
    Group, "group" {
        Governance => "governance",
        Minting => "minting",
        Yield => "yield",
        Redemption => "redemption",
        Market => "market",
        Community => "community",
    }
}

impl SubDimension {
    pub fn group(self) -> Group {
        use SubDimension::*;
        match self {
            GovRuleChange | GovVoting => Group::Governance,
            MintAuthority | MintDataParam => Group::Minting,
            YieldRewardPolicy | YieldOperatorDistribution => Group::Yield,
            RedReserve | RedMechanism => Group::Redemption,
            MarketOwnership | MarketExchange => Group::Market,
            CommunityTransparency => Group::Community,
        }
    }

    /// Standard resource names for this sub-dimension.
    pub fn default_resources(self) -> &'static [&'static str] {
        use SubDimension::*;
        match self {
            GovRuleChange => &[
                "admin_keys",
                "upgrade_authorities",
                "emergency_pause_shutdown",
            ],
            GovVoting => &[
                "quorum_threshold",
                "eligible_voters",
                "delegation_rules",
                "validator_curation",
            ],
            MintAuthority => &["mint_keys", "whitelisted_minters", "custodial_issuers"],
            MintDataParam => &[
                "oracle_operators",
                "oracle_aggregators",
                "collateral_parameters",
                "liquidation_rules",
            ],
            YieldRewardPolicy => &["reward_rates", "emission_schedules", "fee_levels"],
            YieldOperatorDistribution => &[
                "validator_operator_selection",
                "stake_allocation",
                "distribution_mechanisms",
            ],
            RedReserve => &[
                "reserve_custodians",
                "reserve_composition",
                "attestations_audits",
            ],
            RedMechanism => &[
                "gatekeepers_whitelisting",
                "redemption_queues",
                "settlement_custodians",
                "freeze_blocklist_powers",
            ],
            MarketOwnership => &[
                "on_chain_holder",
                "off_chain_register",
                "distribution_disclose",
            ],
            MarketExchange => &[
                "exchange_listing",
                "freeze_halt_controls",
                "designated_market_makers",
            ],
            CommunityTransparency => &["project_info", "governance_info", "operational_info"],
        }
    }

    pub fn is_known_resource(self, name: &str) -> bool {
        self.default_resources().contains(&name)
    }
}

impl Group {
    pub fn subdimensions(self) -> &'static [SubDimension] {
        use SubDimension::*;
        match self {
            Group::Governance => &[GovRuleChange, GovVoting],
            Group::Minting => &[MintAuthority, MintDataParam],
            Group::Yield => &[YieldRewardPolicy, YieldOperatorDistribution],
            Group::Redemption => &[RedReserve, RedMechanism],
            Group::Market => &[MarketOwnership, MarketExchange],
            Group::Community => &[CommunityTransparency],
        }
    }

    /// Governance, minting, yield and redemption.
    pub fn is_core(self) -> bool {
        matches!(
            self,
            Group::Governance | Group::Minting | Group::Yield | Group::Redemption
        )
    }
}

/// Minimum number of independent parties needed to control a resource.
/// `None` means no bounded number of controllers was identified.
pub type PartyCount = Option<NonZeroU32>;

/// Resource name to party count within one sub-dimension.
pub type ResourceEntries = BTreeMap<String, PartyCount>;

/// Sub-dimension to `{resource: j}` map. Absent keys mean nothing was
/// identified for that sub-dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CriticalResourceSurface {
    entries: BTreeMap<SubDimension, ResourceEntries>,
}

impl CriticalResourceSurface {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, sub: SubDimension, resource: &str, parties: Option<u32>) -> Self {
        self.set(sub, resource, parties.and_then(NonZeroU32::new));
        self
    }

    pub fn set(&mut self, sub: SubDimension, resource: &str, parties: PartyCount) {
        self.entries
            .entry(sub)
            .or_default()
            .insert(resource.to_string(), parties);
    }

    /// Inserts an (possibly empty) sub-dimension map, replacing any existing one.
    pub fn insert_subdimension(&mut self, sub: SubDimension, entries: ResourceEntries) {
        self.entries.insert(sub, entries);
    }

    pub fn remove(&mut self, sub: SubDimension, resource: &str) -> Option<PartyCount> {
        let map = self.entries.get_mut(&sub)?;
        map.remove(resource)
    }

    pub fn entries(&self, sub: SubDimension) -> Option<&ResourceEntries> {
        self.entries.get(&sub)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubDimension, &ResourceEntries)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Every `(sub-dimension, resource, j)` triple.
    pub fn resources(&self) -> impl Iterator<Item = (SubDimension, &str, PartyCount)> {
        self.entries
            .iter()
            .flat_map(|(sub, map)| map.iter().map(move |(r, j)| (*sub, r.as_str(), *j)))
    }

    /// True when any sub-dimension of `group` has at least one resource entry.
    pub fn group_has_entries(&self, group: Group) -> bool {
        group
            .subdimensions()
            .iter()
            .any(|sub| self.entries(*sub).is_some_and(|m| !m.is_empty()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.values().all(|m| m.is_empty())
    }
}

impl Serialize for CriticalResourceSurface {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CriticalResourceSurface {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(CriticalResourceSurface {
            entries: BTreeMap::deserialize(d)?,
        })
    }
}
