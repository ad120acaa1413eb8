use serde::Serialize;

use super::trace::{DecisionTrace, Predicate, RuleRunner, Section};
use crate::model::{AssetDescriptor, LegalClassification, LegalTestInputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("legal tests unavailable")]
pub struct LegalTestsUnavailable;

/// Four-way mapping from the Howey, MiFID and ART-AIF tests.
pub fn legal_classification(t: &LegalTestInputs, is_stablecoin: bool) -> LegalClassification {
    let howey = t.howey.met();
    let mifid = t.mifid.met();
    let aif = t.aif.met();
    if howey && aif {
        LegalClassification::FundAif
    } else if howey || mifid {
        LegalClassification::SecurityOrFinancialInstrument
    } else if is_stablecoin {
        LegalClassification::StableValueToken
    } else {
        LegalClassification::OtherCryptoAsset
    }
}

pub fn derive_legal(d: &AssetDescriptor) -> Result<LegalClassification, LegalTestsUnavailable> {
    d.legal_test_inputs
        .as_ref()
        .map(|t| legal_classification(t, d.is_stablecoin))
        .ok_or(LegalTestsUnavailable)
}

/// Agreement between the explicit label and the label derived from tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LegalCheck {
    Match {
        value: LegalClassification,
    },
    Mismatch {
        explicit: LegalClassification,
        derived: LegalClassification,
    },
    ExplicitOnly {
        value: LegalClassification,
    },
    DerivedOnly {
        value: LegalClassification,
    },
    Unclassified,
}

impl LegalCheck {
    /// Label used in reports; the explicit label wins when present.
    pub fn authoritative(&self) -> Option<LegalClassification> {
        match *self {
            LegalCheck::Match { value }
            | LegalCheck::ExplicitOnly { value }
            | LegalCheck::DerivedOnly { value } => Some(value),
            LegalCheck::Mismatch { explicit, .. } => Some(explicit),
            LegalCheck::Unclassified => None,
        }
    }

    /// Label recorded in the trace; the derived label wins when present.
    pub fn traced(&self) -> Option<LegalClassification> {
        match *self {
            LegalCheck::Match { value }
            | LegalCheck::ExplicitOnly { value }
            | LegalCheck::DerivedOnly { value } => Some(value),
            LegalCheck::Mismatch { derived, .. } => Some(derived),
            LegalCheck::Unclassified => None,
        }
    }
}

pub fn check_explicit_legal(d: &AssetDescriptor) -> LegalCheck {
    match (d.explicit_legal_classification, derive_legal(d).ok()) {
        (Some(e), Some(g)) if e == g => LegalCheck::Match { value: e },
        (Some(explicit), Some(derived)) => LegalCheck::Mismatch { explicit, derived },
        (Some(value), None) => LegalCheck::ExplicitOnly { value },
        (None, Some(value)) => LegalCheck::DerivedOnly { value },
        (None, None) => LegalCheck::Unclassified,
    }
}

pub(crate) fn legal_trace(d: &AssetDescriptor, trace: &mut DecisionTrace) -> LegalCheck {
    use LegalClassification::*;
    use Predicate::*;
    let check = check_explicit_legal(d);
    let mut run = RuleRunner::new(d, Section::Legal, trace);
    if run.observe("inputs", LegalInputsPresent) {
        let rules: [(&str, Vec<Predicate>, LegalClassification); 5] = [
            ("1", vec![HoweyMet, AifMet], FundAif),
            ("2a", vec![HoweyMet], SecurityOrFinancialInstrument),
            ("2b", vec![MifidMet], SecurityOrFinancialInstrument),
            ("3", vec![IsStablecoin], StableValueToken),
            ("4", vec![Otherwise], OtherCryptoAsset),
        ];
        for (id, preds, verdict) in rules {
            if run.rule(id, &preds, verdict.as_str()) {
                break;
            }
        }
    } else {
        let verdict = check
            .authoritative()
            .map_or("unclassified", LegalClassification::as_str);
        run.rule("explicit", &[Otherwise], verdict);
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AifProngs, HoweyProngs};

    fn inputs(howey: bool, mifid: bool, aif: bool) -> LegalTestInputs {
        let mut t = LegalTestInputs::from_bits(0);
        if howey {
            t.howey = HoweyProngs {
                investment_of_money: true,
                common_enterprise: true,
                expectation_of_profits: true,
                efforts_of_others: true,
            };
        }
        if mifid {
            t.mifid.profits_or_repayment = true;
            t.mifid.claim_against_identifiable_issuer = true;
        }
        if aif {
            t.aif = AifProngs {
                pooled_risk_return: true,
                defined_investment_policy: true,
                investor_benefit: true,
            };
        }
        t
    }

    #[test]
    fn four_way_mapping() {
        use LegalClassification::*;
        assert_eq!(
            legal_classification(&LegalTestInputs::from_bits(0x1ff), false),
            FundAif
        );
        assert_eq!(
            legal_classification(&inputs(true, false, false), false),
            SecurityOrFinancialInstrument
        );
        assert_eq!(
            legal_classification(&inputs(false, true, false), true),
            SecurityOrFinancialInstrument
        );
        assert_eq!(
            legal_classification(&inputs(false, false, false), true),
            StableValueToken
        );
        assert_eq!(
            legal_classification(&inputs(false, false, false), false),
            OtherCryptoAsset
        );
        // aif alone does not make a fund
        assert_eq!(
            legal_classification(&inputs(false, false, true), false),
            OtherCryptoAsset
        );
    }

    #[test]
    fn fund_regardless_of_mifid() {
        for mifid in [false, true] {
            for stable in [false, true] {
                assert_eq!(
                    legal_classification(&inputs(true, mifid, true), stable),
                    LegalClassification::FundAif
                );
            }
        }
    }

    #[test]
    fn explicit_only_is_authoritative() {
        let mut d = AssetDescriptor::bare("steth", "stETH");
        d.explicit_legal_classification = Some(LegalClassification::OtherCryptoAsset);
        assert_eq!(
            check_explicit_legal(&d),
            LegalCheck::ExplicitOnly {
                value: LegalClassification::OtherCryptoAsset
            }
        );
        assert_eq!(derive_legal(&d), Err(LegalTestsUnavailable));
    }

    #[test]
    fn explicit_and_derived_match() {
        let mut d = AssetDescriptor::bare("x", "X");
        d.is_stablecoin = true;
        d.explicit_legal_classification = Some(LegalClassification::StableValueToken);
        d.legal_test_inputs = Some(LegalTestInputs::from_bits(0));
        assert_eq!(
            check_explicit_legal(&d),
            LegalCheck::Match {
                value: LegalClassification::StableValueToken
            }
        );
    }

    #[test]
    fn mismatch_keeps_both() {
        let mut d = AssetDescriptor::bare("x", "X");
        d.explicit_legal_classification = Some(LegalClassification::OtherCryptoAsset);
        d.legal_test_inputs = Some(inputs(true, false, false));
        let c = check_explicit_legal(&d);
        assert_eq!(
            c,
            LegalCheck::Mismatch {
                explicit: LegalClassification::OtherCryptoAsset,
                derived: LegalClassification::SecurityOrFinancialInstrument
            }
        );
        assert_eq!(
            c.authoritative(),
            Some(LegalClassification::OtherCryptoAsset)
        );
        assert_eq!(
            c.traced(),
            Some(LegalClassification::SecurityOrFinancialInstrument)
        );
    }

    #[test]
    fn neither_is_unclassified() {
        let d = AssetDescriptor::bare("x", "X");
        assert_eq!(check_explicit_legal(&d), LegalCheck::Unclassified);
        assert_eq!(LegalCheck::Unclassified.authoritative(), None);
    }
}
