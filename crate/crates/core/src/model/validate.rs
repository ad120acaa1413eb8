//! Structural validation of raw descriptor records.
//!
//! Validation is total: every field of every record is checked and all
//! findings are collected, in a fixed order, before returning.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::Serialize;
use serde_json::{Map, Value};

use super::descriptor::{
    AifProngs, AssetDescriptor, AssetRef, HoweyProngs, LegalTestInputs, Metadata, MifidProngs,
    PublishedLabels,
};
use super::facets::{
    nearest_literal, AssetFunction, DistributionMechanism, FormOfClaim, IssuerKind,
    LegalClassification, MintingType, RedemptionMechanism, TechnicalStandard, YieldSource,
};
use crate::centralisation::{CriticalResourceSurface, ResourceEntries, SubDimension};

/// How unknown keys are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Unknown keys produce warnings.
    #[default]
    Lenient,
    /// Unknown keys produce errors.
    Strict,
}

/// One finding: where, what value, which rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub value: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: &str, value: &str, message: &str) -> Self {
        Diagnostic {
            path: path.to_string(),
            value: value.to_string(),
            message: message.to_string(),
        }
    }

    fn under(mut self, prefix: &str) -> Self {
        if !prefix.is_empty() {
            self.path = format!("{prefix}.{}", self.path);
        }
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [value: {}]", self.path, self.message, self.value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// A validated value plus non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated<T> {
    pub value: T,
    pub warnings: Vec<Diagnostic>,
}

const DESCRIPTOR_KEYS: &[&str] = &[
    "id",
    "symbol",
    "name",
    "technical_standard",
    "function",
    "issuer_kind",
    "minting_type",
    "yield_source",
    "distribution_mechanism",
    "redemption_mechanism",
    "form_of_claim",
    "reference",
    "is_stablecoin",
    "explicit_legal_classification",
    "legal_test_inputs",
    "critical_resource_surface",
    "metadata",
    "published",
];

/// Validates one raw descriptor record.
pub fn validate_descriptor(
    raw: &Value,
    mode: Strictness,
) -> Result<Validated<AssetDescriptor>, ValidationReport> {
    let mut report = ValidationReport::default();
    let parsed = parse_descriptor(raw, "", mode, &mut report);
    match parsed {
        Some(d) if report.is_clean() => Ok(Validated {
            value: d,
            warnings: report.warnings,
        }),
        _ => Err(report),
    }
}

/// Validates a batch of raw records found under `prefix` (e.g. `assets`),
/// including id uniqueness across the batch.
pub fn validate_batch(
    raws: &[Value],
    prefix: &str,
    mode: Strictness,
) -> Result<Validated<Vec<AssetDescriptor>>, ValidationReport> {
    let mut report = ValidationReport::default();
    let mut out = Vec::with_capacity(raws.len());
    let mut first_seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, raw) in raws.iter().enumerate() {
        let path = format!("{prefix}[{i}]");
        if let Some(id) = raw.get("id").and_then(Value::as_str) {
            if let Some(prev) = first_seen.get(id) {
                report.errors.push(Diagnostic::new(
                    &format!("{path}.id"),
                    id,
                    &format!("duplicate id \"{id}\" at {path} (first at {prefix}[{prev}])"),
                ));
            } else {
                first_seen.insert(id.to_string(), i);
            }
        }
        if let Some(d) = parse_descriptor(raw, &path, mode, &mut report) {
            out.push(d);
        }
    }
    if report.is_clean() {
        Ok(Validated {
            value: out,
            warnings: report.warnings,
        })
    } else {
        Err(report)
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Per-record field reader that records every failure and keeps going.
struct Reader<'a> {
    obj: &'a Map<String, Value>,
    prefix: String,
    mode: Strictness,
    report: &'a mut ValidationReport,
    failed: Vec<&'static str>,
}

impl<'a> Reader<'a> {
    fn path(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.prefix)
        }
    }

    fn error(&mut self, key: &'static str, value: &str, message: &str) {
        let path = self.path(key);
        self.report
            .errors
            .push(Diagnostic::new(&path, value, message));
        self.failed.push(key);
    }

    fn unknown_keys(&mut self, known: &[&'static str]) {
        let unknown: Vec<String> = self
            .obj
            .keys()
            .filter(|k| !known.contains(&k.as_str()))
            .cloned()
            .collect();
        for key in unknown {
            let message = match nearest_literal(&key, known) {
                Some(h) => format!("unknown key (did you mean \"{h}\"?)"),
                None => "unknown key".to_string(),
            };
            let d = Diagnostic::new(&self.path(&key), &key, &message);
            match self.mode {
                Strictness::Strict => self.report.errors.push(d),
                Strictness::Lenient => self.report.warnings.push(d),
            }
        }
    }

    /// Present and non-null value.
    fn present(&self, key: &str) -> Option<&'a Value> {
        self.obj.get(key).filter(|v| !v.is_null())
    }

    fn required(&mut self, key: &'static str) -> Option<&'a Value> {
        match self.obj.get(key) {
            Some(v) if !v.is_null() => Some(v),
            Some(_) => {
                self.error(key, "null", "required field is null");
                None
            }
            None => {
                self.error(key, "<missing>", "required field is missing");
                None
            }
        }
    }

    fn string(&mut self, key: &'static str, required: bool) -> Option<String> {
        let v = if required {
            self.required(key)?
        } else {
            self.present(key)?
        };
        match v.as_str() {
            Some(s) => Some(s.to_string()),
            None => {
                self.error(key, &show(v), "expected a string");
                None
            }
        }
    }

    fn boolean(&mut self, key: &'static str) -> Option<bool> {
        let v = self.required(key)?;
        match v.as_bool() {
            Some(b) => Some(b),
            None => {
                self.error(key, &show(v), "expected a boolean");
                None
            }
        }
    }

    fn literal<T>(&mut self, key: &'static str, required: bool) -> Option<T>
    where
        T: FromStr<Err = super::facets::UnknownLiteral>,
    {
        let s = self.string(key, required)?;
        match s.parse::<T>() {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(key, &s, &e.to_string());
                None
            }
        }
    }

    fn object(&mut self, key: &'static str, v: &'a Value) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(o) => Some(o),
            None => {
                self.error(key, &show(v), "expected an object");
                None
            }
        }
    }

    fn nested<'b>(&'b mut self, key: &'static str, obj: &'a Map<String, Value>) -> Reader<'b>
    where
        'a: 'b,
    {
        let prefix = self.path(key);
        Reader {
            obj,
            prefix,
            mode: self.mode,
            report: self.report,
            failed: Vec::new(),
        }
    }
}

fn parse_descriptor(
    raw: &Value,
    prefix: &str,
    mode: Strictness,
    report: &mut ValidationReport,
) -> Option<AssetDescriptor> {
    let Some(obj) = raw.as_object() else {
        let path = if prefix.is_empty() {
            "<record>"
        } else {
            prefix
        };
        report
            .errors
            .push(Diagnostic::new(path, &show(raw), "expected an object"));
        return None;
    };
    let mut r = Reader {
        obj,
        prefix: prefix.to_string(),
        mode,
        report,
        failed: Vec::new(),
    };
    r.unknown_keys(DESCRIPTOR_KEYS);

    let id = r.string("id", true);
    let symbol = r.string("symbol", true);
    let name = r.string("name", false);
    let technical_standard = r.literal::<TechnicalStandard>("technical_standard", true);
    let function = r.literal::<AssetFunction>("function", true);
    let issuer_kind = r.literal::<IssuerKind>("issuer_kind", true);
    let minting_type = r.literal::<MintingType>("minting_type", true);
    let yield_source = r.literal::<YieldSource>("yield_source", true);
    let distribution = r.literal::<DistributionMechanism>("distribution_mechanism", false);
    let redemption = r.literal::<RedemptionMechanism>("redemption_mechanism", true);
    let form_of_claim = r.literal::<FormOfClaim>("form_of_claim", true);
    let reference = parse_reference(&mut r);
    let is_stablecoin = r.boolean("is_stablecoin");
    let explicit_legal = r.literal::<LegalClassification>("explicit_legal_classification", false);
    let legal_inputs = parse_legal_inputs(&mut r);
    let surface = parse_surface(&mut r);
    let metadata = parse_metadata(&mut r);
    let published = parse_published(&mut r);

    let failed = std::mem::take(&mut r.failed);
    let descriptor = AssetDescriptor {
        id: id.unwrap_or_default(),
        symbol: symbol.unwrap_or_else(|| "?".into()),
        name,
        technical_standard: technical_standard.unwrap_or(TechnicalStandard::Native),
        function: function.unwrap_or(AssetFunction::Other),
        issuer_kind: issuer_kind.unwrap_or(IssuerKind::Protocol),
        minting_type: minting_type.unwrap_or(MintingType::Consensus),
        yield_source: yield_source.unwrap_or(YieldSource::None),
        distribution_mechanism: distribution,
        redemption_mechanism: redemption.unwrap_or(RedemptionMechanism::None),
        form_of_claim: form_of_claim.unwrap_or(FormOfClaim::NoClaim),
        reference: reference.flatten(),
        is_stablecoin: is_stablecoin.unwrap_or(false),
        explicit_legal_classification: explicit_legal,
        legal_test_inputs: legal_inputs.flatten(),
        critical_resource_surface: surface.flatten(),
        metadata: metadata.flatten(),
        published: published.flatten(),
    };

    // Cross-field checks only for fields that parsed; placeholders never
    // produce findings of their own.
    for (fields, diag) in descriptor.invariant_checks() {
        if fields.iter().any(|f| failed.contains(f)) {
            continue;
        }
        r.report.errors.push(diag.under(prefix));
    }

    failed.is_empty().then_some(descriptor)
}

/// Outer `None` = field failed; inner `None` = field null/absent.
fn parse_reference(r: &mut Reader<'_>) -> Option<Option<AssetRef>> {
    let Some(v) = r.present("reference") else {
        return Some(None);
    };
    let obj = r.object("reference", v)?;
    let mut n = r.nested("reference", obj);
    n.unknown_keys(&["symbol", "is_fiat"]);
    let symbol = n.string("symbol", true);
    let is_fiat = n.boolean("is_fiat");
    let ok = n.failed.is_empty();
    if !ok {
        r.failed.push("reference");
        return None;
    }
    Some(Some(AssetRef {
        symbol: symbol?,
        is_fiat: is_fiat?,
    }))
}

fn parse_legal_inputs(r: &mut Reader<'_>) -> Option<Option<LegalTestInputs>> {
    let Some(v) = r.present("legal_test_inputs") else {
        return Some(None);
    };
    let obj = r.object("legal_test_inputs", v)?;
    let mut n = r.nested("legal_test_inputs", obj);
    n.unknown_keys(&["howey", "mifid", "aif"]);

    let prongs = |n: &mut Reader<'_>, key: &'static str, names: &[&'static str]| {
        let v = n.required(key)?;
        let o = n.object(key, v)?;
        let mut m = n.nested(key, o);
        m.unknown_keys(names);
        let vals: Vec<Option<bool>> = names.iter().map(|p| m.boolean(p)).collect();
        let ok = m.failed.is_empty();
        if !ok {
            n.failed.push(key);
            return None;
        }
        vals.into_iter().collect::<Option<Vec<bool>>>()
    };
    let howey = prongs(
        &mut n,
        "howey",
        &[
            "investment_of_money",
            "common_enterprise",
            "expectation_of_profits",
            "efforts_of_others",
        ],
    );
    let mifid = prongs(
        &mut n,
        "mifid",
        &["profits_or_repayment", "claim_against_identifiable_issuer"],
    );
    let aif = prongs(
        &mut n,
        "aif",
        &[
            "pooled_risk_return",
            "defined_investment_policy",
            "investor_benefit",
        ],
    );
    if !n.failed.is_empty() {
        r.failed.push("legal_test_inputs");
        return None;
    }
    let (h, m, a) = (howey?, mifid?, aif?);
    Some(Some(LegalTestInputs {
        howey: HoweyProngs {
            investment_of_money: h[0],
            common_enterprise: h[1],
            expectation_of_profits: h[2],
            efforts_of_others: h[3],
        },
        mifid: MifidProngs {
            profits_or_repayment: m[0],
            claim_against_identifiable_issuer: m[1],
        },
        aif: AifProngs {
            pooled_risk_return: a[0],
            defined_investment_policy: a[1],
            investor_benefit: a[2],
        },
    }))
}

fn parse_surface(r: &mut Reader<'_>) -> Option<Option<CriticalResourceSurface>> {
    let v = match r.obj.get("critical_resource_surface") {
        None => {
            r.error(
                "critical_resource_surface",
                "<missing>",
                "required field is missing (use null when not assessed)",
            );
            return None;
        }
        Some(Value::Null) => return Some(None),
        Some(v) => v,
    };
    let obj = r.object("critical_resource_surface", v)?;
    let base = r.path("critical_resource_surface");
    let mut surface = CriticalResourceSurface::new();
    let mut ok = true;
    for (sub_key, entries) in obj {
        let sub_path = format!("{base}.{sub_key}");
        let sub = match sub_key.parse::<SubDimension>() {
            Ok(s) => s,
            Err(e) => {
                r.report
                    .errors
                    .push(Diagnostic::new(&sub_path, sub_key, &e.to_string()));
                ok = false;
                continue;
            }
        };
        let Some(map) = entries.as_object() else {
            r.report.errors.push(Diagnostic::new(
                &sub_path,
                &show(entries),
                "expected an object of {resource: party count}",
            ));
            ok = false;
            continue;
        };
        let mut parsed = ResourceEntries::new();
        for (resource, j) in map {
            let res_path = format!("{sub_path}.{resource}");
            if !sub.is_known_resource(resource) {
                let message = match nearest_literal(resource, sub.default_resources()) {
                    Some(h) => format!("unknown resource for {sub} (did you mean \"{h}\"?)"),
                    None => format!("unknown resource for {sub}"),
                };
                r.report
                    .warnings
                    .push(Diagnostic::new(&res_path, resource, &message));
            }
            let count = match j {
                Value::Null => Some(None),
                Value::Number(n) => n
                    .as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .and_then(NonZeroU32::new)
                    .map(Some),
                _ => None,
            };
            match count {
                Some(c) => {
                    parsed.insert(resource.clone(), c);
                }
                None => {
                    r.report.errors.push(Diagnostic::new(
                        &res_path,
                        &show(j),
                        "party count must be a positive integer or null",
                    ));
                    ok = false;
                }
            }
        }
        surface.insert_subdimension(sub, parsed);
    }
    if !ok {
        r.failed.push("critical_resource_surface");
        return None;
    }
    Some(Some(surface))
}

fn parse_metadata(r: &mut Reader<'_>) -> Option<Option<Metadata>> {
    let Some(v) = r.present("metadata") else {
        return Some(None);
    };
    let obj = r.object("metadata", v)?;
    let mut n = r.nested("metadata", obj);
    n.unknown_keys(&["market_cap_usd", "snapshot_date"]);
    let cap = n.required("market_cap_usd").and_then(|v| match v.as_f64() {
        Some(x) if x >= 0.0 && x.is_finite() => Some(x),
        _ => {
            n.error(
                "market_cap_usd",
                &show(v),
                "market cap must be a non-negative number",
            );
            None
        }
    });
    let date = n.string("snapshot_date", true).and_then(|s| {
        match NaiveDate::parse_from_str(&s, "%Y-%m-%d") {
            Ok(d) => Some(d),
            Err(_) => {
                n.error("snapshot_date", &s, "expected a date YYYY-MM-DD");
                None
            }
        }
    });
    if !n.failed.is_empty() {
        r.failed.push("metadata");
        return None;
    }
    Some(Some(Metadata {
        market_cap_usd: cap?,
        snapshot_date: date?,
    }))
}

fn parse_published(r: &mut Reader<'_>) -> Option<Option<PublishedLabels>> {
    let Some(v) = r.present("published") else {
        return Some(None);
    };
    let obj = r.object("published", v)?;
    let mut n = r.nested("published", obj);
    n.unknown_keys(&[
        "centralisation",
        "reference_category",
        "legal_classification",
        "tradfi_analogy",
    ]);
    let labels = PublishedLabels {
        centralisation: n.literal("centralisation", false),
        reference_category: n.literal("reference_category", false),
        legal_classification: n.literal("legal_classification", false),
        tradfi_analogy: n.literal("tradfi_analogy", false),
    };
    if !n.failed.is_empty() {
        r.failed.push("published");
        return None;
    }
    Some(Some(labels))
}

impl AssetDescriptor {
    /// Invariant checks tagged with the fields each one reads.
    pub(crate) fn invariant_checks(&self) -> Vec<(&'static [&'static str], Diagnostic)> {
        self.invariant_violations()
            .into_iter()
            .map(|d| {
                let fields: &'static [&'static str] = match d.path.as_str() {
                    "id" => &["id"],
                    "symbol" => &["symbol"],
                    "reference.symbol" => &["reference"],
                    "distribution_mechanism" => &["yield_source", "distribution_mechanism"],
                    "reference" if d.message.starts_with("stablecoin") => {
                        &["is_stablecoin", "reference"]
                    }
                    "reference" => &["redemption_mechanism", "reference"],
                    "minting_type" => &["issuer_kind", "minting_type"],
                    _ => &["metadata"],
                };
                (fields, d)
            })
            .collect()
    }
}
