//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::num::NonZeroU32;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crypto_taxonomy::centralisation::{
    assess_ownership, centralisation_label, label_from_statuses, ownership_parties,
    CentralisationLabel, CriticalResourceSurface, Group, GroupOutcome, GroupStatus, SubDimension,
};
use crypto_taxonomy::classification::{
    classify, legal_classification, tradfi_analogy, FlagKind, ReferenceCategory, Section,
    TradFiAnalogy,
};
use crypto_taxonomy::corpus::{parse_corpus_str, parse_holder_snapshot, write_holder_snapshot};
use crypto_taxonomy::model::{
    AssetDescriptor, AssetFunction, AssetRef, DistributionMechanism, FormOfClaim, IssuerKind,
    LegalClassification, LegalTestInputs, MintingType, RedemptionMechanism, YieldSource,
};
use crypto_taxonomy::reporting::{
    bucket_table, facet_distribution, parallel_set_paths, ClassifiedCorpus, Dimension,
    ReportBundle, DEFAULT_PATH_DIMENSIONS, UNCLASSIFIED,
};
use crypto_taxonomy::{load_corpus, load_holder_snapshot, Strictness};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

// 1. Golden case-box fixtures.
fn golden_fixtures() -> Outcome {
    use CentralisationLabel::*;
    use TradFiAnalogy::*;
    let start = Instant::now();
    let corpus = load_corpus(&fixture("case_studies.json"), Strictness::Strict)
        .map_err(|e| e.to_string())?
        .corpus;
    let expected = [
        ("btc", Decentralised, Commodity),
        ("uni", Decentralised, VotingEquityShare),
        ("hbar", Decentralised, PaymentInKind),
        ("dai", Decentralised, Repo),
        ("wbtc", Hybrid, DepositaryReceipt),
        ("steth", Decentralised, PassThroughCertificate),
        ("cbeth", Centralised, CapitalisingShareClass),
        ("xrp", Centralised, Commodity),
        ("hbarx", Decentralised, Other),
    ];
    for (id, label, analogy) in expected {
        let d = corpus.get(id).ok_or_else(|| format!("{id} missing"))?;
        let c = classify(d).map_err(|e| e.to_string())?;
        check(c.centralisation == Some(label), || {
            format!("{id}: centralisation {:?}", c.centralisation)
        })?;
        check(c.tradfi_analogy == analogy, || {
            format!("{id}: analogy {}", c.tradfi_analogy)
        })?;
        check(c.trace.replay(d).is_ok(), || format!("{id}: trace replay"))?;
        let inconsistent = c.has(FlagKind::FixtureInconsistency);
        check(inconsistent == (id == "hbarx"), || {
            format!("{id}: fixture-inconsistency flag = {inconsistent}")
        })?;
        if id == "dai" {
            check(
                c.reference_category == ReferenceCategory::AssetReferencedToken,
                || format!("dai: reference {}", c.reference_category),
            )?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "9/9 fixtures, hbarx flagged, {:?}",
        start.elapsed()
    ))
}

// 2. Centralisation truth table over all group-status vectors.
fn truth_table_oracle(v: &[GroupStatus; 6]) -> CentralisationLabel {
    // groups in order: governance, minting, yield, redemption, market, community
    let mut any_fail = false;
    let mut core_seen = 0;
    let mut core_fail = 0;
    for (i, s) in v.iter().enumerate() {
        let is_core = i < 4;
        match s {
            GroupStatus::Fail => {
                any_fail = true;
                if is_core {
                    core_seen += 1;
                    core_fail += 1;
                }
            }
            GroupStatus::Pass => {
                if is_core {
                    core_seen += 1;
                }
            }
            GroupStatus::NotApplicable => {}
        }
    }
    if !any_fail {
        CentralisationLabel::Decentralised
    } else if core_seen > 0 && core_fail == core_seen {
        CentralisationLabel::Centralised
    } else {
        CentralisationLabel::Hybrid
    }
}

fn truth_table() -> Outcome {
    let start = Instant::now();
    let statuses = [
        GroupStatus::Pass,
        GroupStatus::Fail,
        GroupStatus::NotApplicable,
    ];
    let mut n = 0;
    for code in 0..729u32 {
        let mut v = [GroupStatus::Pass; 6];
        let mut c = code;
        for slot in v.iter_mut() {
            *slot = statuses[(c % 3) as usize];
            c /= 3;
        }
        let expected = truth_table_oracle(&v);
        let got = label_from_statuses(&v);
        check(got == expected, || format!("{v:?}: {got} vs {expected}"))?;
        let outcomes: Vec<GroupOutcome> = Group::ALL
            .iter()
            .zip(v)
            .map(|(g, status)| GroupOutcome {
                group: *g,
                status,
                failing: if status == GroupStatus::Fail {
                    vec![(g.subdimensions()[0], "x".to_string())]
                } else {
                    Vec::new()
                },
            })
            .collect();
        let via_outcomes = centralisation_label(&outcomes).map_err(|e| e.to_string())?;
        check(via_outcomes == expected, || format!("{v:?}: outcome list"))?;
        n += 1;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{n}/729 vectors agree, {:?}", start.elapsed()))
}

// 3. Analogy totality and exclusivity over the facet product.
fn analogy_oracle(d: &AssetDescriptor) -> TradFiAnalogy {
    let r = d.reference.is_some();
    let s = d.is_stablecoin;
    let y_none = d.yield_source == YieldSource::None;
    let dist = d.distribution_mechanism;
    let q = dist == Some(DistributionMechanism::QuantityAccrual);
    let v = dist == Some(DistributionMechanism::ValueAccrual);
    let fired = [
        (
            !r && d.function == AssetFunction::Governance,
            TradFiAnalogy::VotingEquityShare,
        ),
        (
            !r && y_none && d.form_of_claim == FormOfClaim::NoClaim,
            TradFiAnalogy::Commodity,
        ),
        (!r && !y_none && q, TradFiAnalogy::PaymentInKind),
        (
            r && s
                && matches!(
                    d.redemption_mechanism,
                    RedemptionMechanism::ProtocolPar | RedemptionMechanism::BurnToUnlock
                ),
            TradFiAnalogy::Repo,
        ),
        (
            r && !s && y_none && d.minting_type == MintingType::Wrapped,
            TradFiAnalogy::DepositaryReceipt,
        ),
        (r && !s && q, TradFiAnalogy::PassThroughCertificate),
        (r && !s && v, TradFiAnalogy::CapitalisingShareClass),
    ];
    fired
        .iter()
        .find(|(hit, _)| *hit)
        .map_or(TradFiAnalogy::Other, |(_, a)| *a)
}

fn analogy_enumeration() -> Outcome {
    let start = Instant::now();
    let mut seen = [0usize; 8];
    let mut n = 0usize;
    let mut d = AssetDescriptor::bare("x", "X");
    d.critical_resource_surface = None;
    for has_ref in [false, true] {
        d.reference = has_ref.then(|| AssetRef::new("USD", true));
        for stable in [false, true] {
            d.is_stablecoin = stable;
            for f in AssetFunction::ALL {
                d.function = *f;
                for m in MintingType::ALL {
                    d.minting_type = *m;
                    for y in YieldSource::ALL {
                        d.yield_source = *y;
                        for dist in DistributionMechanism::ALL {
                            d.distribution_mechanism = Some(*dist);
                            for r in RedemptionMechanism::ALL {
                                d.redemption_mechanism = *r;
                                for c in FormOfClaim::ALL {
                                    d.form_of_claim = *c;
                                    let (got, trace) = tradfi_analogy(&d);
                                    let deciding = trace
                                        .section(Section::Analogy)
                                        .filter(|s| s.verdict.is_some())
                                        .count();
                                    if deciding != 1 {
                                        return Err(format!("{deciding} verdicts for {d:?}"));
                                    }
                                    let want = analogy_oracle(&d);
                                    if got != want {
                                        return Err(format!("{got} vs oracle {want} for {d:?}"));
                                    }
                                    seen[got as usize] += 1;
                                    n += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let product = 2 * 2 * 4 * 8 * 7 * 5 * 8 * 6;
    check(n == product, || {
        format!("enumerated {n}, expected {product}")
    })?;
    let unreachable: Vec<_> = TradFiAnalogy::ALL
        .iter()
        .filter(|a| **a != TradFiAnalogy::Other && seen[**a as usize] == 0)
        .collect();
    check(unreachable.is_empty(), || {
        format!("unreachable: {unreachable:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{n} tuples, one analogy each, 7/7 named reachable, {:?}",
        start.elapsed()
    ))
}

// 4. Monotonicity over randomized surfaces.
fn random_descriptor(rng: &mut ChaCha8Rng) -> AssetDescriptor {
    let mut d = AssetDescriptor::bare("r", "R");
    d.issuer_kind = IssuerKind::Protocol;
    d.minting_type = MintingType::Staking;
    if rng.gen_bool(0.5) {
        d.yield_source = YieldSource::StakingRewards;
        d.distribution_mechanism = Some(DistributionMechanism::QuantityAccrual);
    }
    if rng.gen_bool(0.5) {
        d.reference = Some(AssetRef::new("ETH", false));
        if rng.gen_bool(0.5) {
            d.redemption_mechanism = RedemptionMechanism::QueuedWithdrawal;
        }
    }
    let mut s = CriticalResourceSurface::new();
    for _ in 0..rng.gen_range(0..10) {
        let sub = SubDimension::ALL[rng.gen_range(0..SubDimension::ALL.len())];
        let names = sub.default_resources();
        let name = names[rng.gen_range(0..names.len())];
        let j = match rng.gen_range(0..4) {
            0 => None,
            1 => Some(1),
            _ => Some(rng.gen_range(2..10)),
        };
        s.set(sub, name, j.and_then(NonZeroU32::new));
    }
    d.critical_resource_surface = Some(s);
    d
}

fn label_of(d: &AssetDescriptor) -> Result<CentralisationLabel, String> {
    classify(d)
        .map_err(|e| e.to_string())?
        .centralisation
        .ok_or_else(|| "unassessed".to_string())
}

fn monotonicity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a78_6f6e);
    let mut single_checks = 0;
    for i in 0..1000 {
        let d = random_descriptor(&mut rng);
        let before = label_of(&d)?;
        let surface = d.critical_resource_surface.clone().unwrap();
        for (sub, res, _) in surface.resources() {
            let mut e = d.clone();
            e.critical_resource_surface
                .as_mut()
                .unwrap()
                .set(sub, res, NonZeroU32::new(1));
            let after = label_of(&e)?;
            check(after >= before, || {
                format!("surface {i}: forcing {sub}.{res} moved {before} -> {after}")
            })?;
            single_checks += 1;
        }
        let mut forced = d.clone();
        let s = forced.critical_resource_surface.as_mut().unwrap();
        for group in Group::ALL.iter().filter(|g| g.is_core()) {
            if !crypto_taxonomy::centralisation::group_applicable(*group, &surface, &d) {
                continue;
            }
            let mut any = false;
            for sub in group.subdimensions() {
                let names: Vec<String> = surface
                    .entries(*sub)
                    .map(|m| m.keys().cloned().collect())
                    .unwrap_or_default();
                for name in names {
                    s.set(*sub, &name, NonZeroU32::new(1));
                    any = true;
                }
            }
            if !any {
                let sub = group.subdimensions()[0];
                s.set(sub, sub.default_resources()[0], NonZeroU32::new(1));
            }
        }
        let all = label_of(&forced)?;
        check(all == CentralisationLabel::Centralised, || {
            format!("surface {i}: forcing all core groups gave {all}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "1000 surfaces, {single_checks} single-resource forcings, {:?}",
        start.elapsed()
    ))
}

// 5. Ownership threshold boundary.
fn ownership_boundary() -> Outcome {
    let dec = |s: &str| BigDecimal::from_str(s).unwrap();
    let unit = "0.000000000000000001";
    // 1 top holder, 99 others summing to 400, 50 tail holders outside the top 100
    let build = |eps: &str| {
        let mut v = vec![&dec("600") + &dec(eps)];
        v.extend(std::iter::repeat_n(dec("4"), 98));
        v.push(&dec("8") - &dec(eps));
        v.extend(std::iter::repeat_n(dec("3"), 50));
        v
    };
    let at = assess_ownership(&build("0")).map_err(|e| e.to_string())?;
    let above = assess_ownership(&build(unit)).map_err(|e| e.to_string())?;
    check(at.top_total == dec("1000"), || {
        format!("top total {}", at.top_total)
    })?;
    check(at.parties.is_none(), || "60.0% gave parties=1".into())?;
    check(above.parties.map(|n| n.get()) == Some(1), || {
        "60.0%+unit gave unbounded".into()
    })?;

    // same boundary with integer and rational scalars
    let ints_at: Vec<u64> = vec![600, 400];
    let ints_above: Vec<u64> = vec![601, 399];
    check(
        assess_ownership(&ints_at).unwrap().parties.is_none(),
        || "u64 at".into(),
    )?;
    check(
        assess_ownership(&ints_above).unwrap().parties.is_some(),
        || "u64 above".into(),
    )?;
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let rat_at = vec![q(3, 5), q(2, 5)];
    let rat_above = vec![q(3, 5) + q(1, 10i64.pow(18)), q(2, 5) - q(1, 10i64.pow(18))];
    check(assess_ownership(&rat_at).unwrap().parties.is_none(), || {
        "rational at".into()
    })?;
    check(
        assess_ownership(&rat_above).unwrap().parties.is_some(),
        || "rational above".into(),
    )?;

    // fixture files, loaded through the exact-decimal parser
    let f_at =
        load_holder_snapshot(&fixture("holders_boundary_at.csv")).map_err(|e| e.to_string())?;
    let f_above =
        load_holder_snapshot(&fixture("holders_boundary_above.csv")).map_err(|e| e.to_string())?;
    check(ownership_parties(&f_at).unwrap().is_none(), || {
        "fixture at".into()
    })?;
    check(ownership_parties(&f_above).unwrap().is_some(), || {
        "fixture above".into()
    })?;
    Ok("60.0% -> unbounded, 60.0%+1e-18 -> parties=1 (decimal, u64, rational, fixtures)".into())
}

// 6. Legal decision procedure over all prong combinations.
fn legal_oracle(bits: u16, stable: bool) -> LegalClassification {
    let all = |mask: u16| bits & mask == mask;
    let howey = all(0b0000_1111);
    let mifid = all(0b0011_0000);
    let aif = all(0b1_1100_0000);
    match (howey, mifid, aif, stable) {
        (true, _, true, _) => LegalClassification::FundAif,
        (true, _, _, _) | (_, true, _, _) => LegalClassification::SecurityOrFinancialInstrument,
        (false, false, _, true) => LegalClassification::StableValueToken,
        (false, false, _, false) => LegalClassification::OtherCryptoAsset,
    }
}

fn legal_procedure() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for bits in 0..512u16 {
        for stable in [false, true] {
            let got = legal_classification(&LegalTestInputs::from_bits(bits), stable);
            let want = legal_oracle(bits, stable);
            check(got == want, || {
                format!("bits {bits:09b} stable {stable}: {got} vs {want}")
            })?;
            n += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{n}/1024 cases match, {:?}", start.elapsed()))
}

// 7. Corpus-scale substitute: conservation and determinism on corpus30.
fn corpus_reports() -> Outcome {
    let corpus = load_corpus(&fixture("corpus30.json"), Strictness::Strict)
        .map_err(|e| e.to_string())?
        .corpus;
    check(corpus.len() == 30, || format!("{} assets", corpus.len()))?;
    let synthetic = corpus
        .assets
        .iter()
        .filter(|a| a.id.starts_with("syn-"))
        .count();
    check(synthetic == 21, || format!("{synthetic} synthetic"))?;
    let cc = ClassifiedCorpus::classify(&corpus).map_err(|e| e.to_string())?;
    for dim in Dimension::ALL {
        let dist = facet_distribution(&cc, *dim);
        let sum: usize = dist.counts.iter().map(|(_, n)| n).sum();
        check(sum == dist.total && dist.total == 30, || {
            format!("{dim}: {sum}/{}", dist.total)
        })?;
        let buckets = bucket_table(&cc, *dim);
        check(buckets.total() == 30, || {
            format!("{dim}: buckets hold {}", buckets.total())
        })?;
    }
    let central = bucket_table(&cc, Dimension::Centralisation);
    let unclassified = central.bucket(UNCLASSIFIED).unwrap_or_default().len();
    check(unclassified > 0, || "no unclassified bucket entries".into())?;
    for dims in [
        DEFAULT_PATH_DIMENSIONS.to_vec(),
        vec![Dimension::Centralisation, Dimension::DistributionMechanism],
    ] {
        let ps = parallel_set_paths(&cc, &dims).map_err(|e| e.to_string())?;
        check(ps.path_total() + ps.excluded.len() == 30, || {
            "path conservation".into()
        })?;
    }

    let render = || -> Result<Vec<(String, Vec<u8>)>, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let fresh = load_corpus(&fixture("corpus30.json"), Strictness::Strict)
            .map_err(|e| e.to_string())?
            .corpus;
        let cc = ClassifiedCorpus::classify(&fresh).map_err(|e| e.to_string())?;
        let files = ReportBundle::build(&cc, DEFAULT_PATH_DIMENSIONS)
            .map_err(|e| e.to_string())?
            .write(dir.path())
            .map_err(|e| e.to_string())?;
        files
            .into_iter()
            .map(|p| {
                let name = p.file_name().unwrap().to_string_lossy().into_owned();
                std::fs::read(&p)
                    .map(|b| (name, b))
                    .map_err(|e| e.to_string())
            })
            .collect()
    };
    let (a, b) = (render()?, render()?);
    check(a == b, || "report bytes differ between runs".into())?;
    Ok(format!(
        "30 assets, sums conserved, {} ({unclassified} unclassified), {} files byte-identical",
        crypto_taxonomy::reporting::bucket_summary(&central),
        a.len()
    ))
}

// 8. Round-trips.
fn round_trips() -> Outcome {
    for name in ["case_studies.json", "corpus30.json"] {
        let first = load_corpus(&fixture(name), Strictness::Strict)
            .map_err(|e| e.to_string())?
            .corpus;
        let text = first.to_json_string();
        let second = parse_corpus_str(&text, Strictness::Strict)
            .map_err(|e| e.to_string())?
            .corpus;
        check(first == second, || format!("{name}: corpus changed"))?;
        check(second.to_json_string() == text, || {
            format!("{name}: text not stable")
        })?;
    }
    let mut n = 0;
    for name in [
        "holders_61_39.csv",
        "holders_60_40.csv",
        "holders_150_top_heavy.csv",
        "holders_150_tail_flip.csv",
        "holders_boundary_at.csv",
        "holders_boundary_above.csv",
    ] {
        let s = load_holder_snapshot(&fixture(name)).map_err(|e| e.to_string())?;
        let verdict = ownership_parties(&s).map_err(|e| e.to_string())?;
        let back = parse_holder_snapshot(&write_holder_snapshot(&s)).map_err(|e| e.to_string())?;
        check(back == s, || format!("{name}: snapshot changed"))?;
        // textual variants of the same numbers
        let padded = s.clone().map(|b| {
            let text = b.to_string();
            let text = if text.contains('.') {
                text + "000"
            } else {
                text + ".000"
            };
            BigDecimal::from_str(&text).unwrap()
        });
        let reparsed =
            parse_holder_snapshot(&write_holder_snapshot(&padded)).map_err(|e| e.to_string())?;
        for ((_, a), (_, b)) in reparsed.balances.iter().zip(&s.balances) {
            check(a == b, || format!("{name}: {a} != {b}"))?;
        }
        check(ownership_parties(&reparsed).unwrap() == verdict, || {
            format!("{name}: verdict changed under re-serialization")
        })?;
        n += 1;
    }
    Ok(format!(
        "2 corpora identical after load/serialize/load, {n} snapshots exact"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden case-box fixtures", golden_fixtures),
        ("centralisation truth table", truth_table),
        ("analogy totality/exclusivity", analogy_enumeration),
        ("monotonicity", monotonicity),
        ("ownership threshold", ownership_boundary),
        ("legal decision procedure", legal_procedure),
        ("corpus report invariants", corpus_reports),
        ("round-trip", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
