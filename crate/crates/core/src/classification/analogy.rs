use super::trace::{DecisionTrace, Predicate, RuleRunner, Section};
use crate::model::facets::facet;
use crate::model::{
    AssetDescriptor, AssetFunction, DistributionMechanism, FormOfClaim, MintingType,
    RedemptionMechanism, YieldSource,
};

facet! {
    /// Traditional-finance counterpart of an asset.
    TradFiAnalogy, "tradfi_analogy" {
        Commodity => "commodity",
        VotingEquityShare => "voting_equity_share",
        PaymentInKind => "payment_in_kind",
        Repo => "repo",
        DepositaryReceipt => "depositary_receipt",
        CapitalisingShareClass => "capitalising_share_class",
        PassThroughCertificate => "pass_through_certificate",
        Other => "other",
    }
}

const REPO_REDEMPTION: &[RedemptionMechanism] = &[
    RedemptionMechanism::ProtocolPar,
    RedemptionMechanism::BurnToUnlock,
];

/// Ordered analogy rules; the first rule whose conjunction holds wins.
pub fn analogy_rules() -> Vec<(&'static str, Vec<Predicate>, TradFiAnalogy)> {
    use Predicate::*;
    use TradFiAnalogy::*;
    let absent = || Predicate::negate(ReferencePresent);
    vec![
        (
            "1",
            vec![absent(), FunctionIs(AssetFunction::Governance)],
            VotingEquityShare,
        ),
        (
            "2",
            vec![
                absent(),
                YieldSourceIs(YieldSource::None),
                FormOfClaimIs(FormOfClaim::NoClaim),
            ],
            Commodity,
        ),
        (
            "3",
            vec![
                absent(),
                Predicate::negate(YieldSourceIs(YieldSource::None)),
                DistributionIs(DistributionMechanism::QuantityAccrual),
            ],
            PaymentInKind,
        ),
        (
            "4",
            vec![
                ReferencePresent,
                IsStablecoin,
                RedemptionIn(REPO_REDEMPTION),
            ],
            Repo,
        ),
        (
            "5",
            vec![
                ReferencePresent,
                Predicate::negate(IsStablecoin),
                YieldSourceIs(YieldSource::None),
                MintingIs(MintingType::Wrapped),
            ],
            DepositaryReceipt,
        ),
        (
            "6",
            vec![
                ReferencePresent,
                Predicate::negate(IsStablecoin),
                DistributionIs(DistributionMechanism::QuantityAccrual),
            ],
            PassThroughCertificate,
        ),
        (
            "7",
            vec![
                ReferencePresent,
                Predicate::negate(IsStablecoin),
                DistributionIs(DistributionMechanism::ValueAccrual),
            ],
            CapitalisingShareClass,
        ),
        ("8", vec![Otherwise], Other),
    ]
}

pub fn tradfi_analogy(d: &AssetDescriptor) -> (TradFiAnalogy, DecisionTrace) {
    let mut trace = DecisionTrace::new();
    let analogy = analogy_trace(d, &mut trace);
    (analogy, trace)
}

pub(crate) fn analogy_trace(d: &AssetDescriptor, trace: &mut DecisionTrace) -> TradFiAnalogy {
    let mut run = RuleRunner::new(d, Section::Analogy, trace);
    for (id, preds, analogy) in analogy_rules() {
        if run.rule(id, &preds, analogy.as_str()) {
            return analogy;
        }
    }
    unreachable!("rule 8 always matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AssetRef, IssuerKind};

    fn lst(distribution: DistributionMechanism) -> AssetDescriptor {
        let mut d = AssetDescriptor::bare("lst", "LST");
        d.issuer_kind = IssuerKind::Protocol;
        d.minting_type = MintingType::Staking;
        d.yield_source = YieldSource::StakingRewards;
        d.distribution_mechanism = Some(distribution);
        d.redemption_mechanism = RedemptionMechanism::QueuedWithdrawal;
        d.reference = Some(AssetRef::new("ETH", false));
        d
    }

    #[test]
    fn accrual_styles() {
        let (a, trace) = tradfi_analogy(&lst(DistributionMechanism::QuantityAccrual));
        assert_eq!(a, TradFiAnalogy::PassThroughCertificate);
        assert!(trace
            .lines()
            .last()
            .unwrap()
            .ends_with("rule 6: distribution=quantity_accrual → pass_through_certificate"));
        let (a, _) = tradfi_analogy(&lst(DistributionMechanism::ValueAccrual));
        assert_eq!(a, TradFiAnalogy::CapitalisingShareClass);
        let (a, _) = tradfi_analogy(&lst(DistributionMechanism::PriceAccrual));
        assert_eq!(a, TradFiAnalogy::Other);
    }

    #[test]
    fn governance_precedes_payment_in_kind() {
        let mut d = AssetDescriptor::bare("gov", "GOV");
        d.function = AssetFunction::Governance;
        d.issuer_kind = IssuerKind::Protocol;
        d.minting_type = MintingType::EmissionGovernance;
        d.yield_source = YieldSource::IncentiveEmissions;
        d.distribution_mechanism = Some(DistributionMechanism::QuantityAccrual);
        assert_eq!(tradfi_analogy(&d).0, TradFiAnalogy::VotingEquityShare);
        d.function = AssetFunction::Utility;
        assert_eq!(tradfi_analogy(&d).0, TradFiAnalogy::PaymentInKind);
    }

    #[test]
    fn unstated_distribution_falls_through() {
        let mut d = lst(DistributionMechanism::QuantityAccrual);
        d.distribution_mechanism = None;
        assert_eq!(tradfi_analogy(&d).0, TradFiAnalogy::Other);
    }

    #[test]
    fn trace_short_circuits_and_replays() {
        let d = AssetDescriptor::bare("btc", "BTC");
        let (a, trace) = tradfi_analogy(&d);
        assert_eq!(a, TradFiAnalogy::Commodity);
        // rule 1 stops at function, rule 2 runs all three predicates
        assert_eq!(trace.steps().len(), 5);
        assert!(trace.replay(&d).is_ok());
        assert_eq!(trace.verdict(Section::Analogy), Some("commodity"));
    }
}
