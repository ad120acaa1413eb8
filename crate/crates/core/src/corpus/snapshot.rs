use std::fmt::{self, Display};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bigdecimal::{BigDecimal, Zero};
use chrono::NaiveDate;

use crate::Balance;

/// Major version written to, and accepted from, the `# version=` comment.
pub const SNAPSHOT_VERSION: u32 = 1;

const HEADER: &str = "address,balance";

/// Holder balances for one token at one date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolderSnapshot<B> {
    pub chain: Option<String>,
    pub token_id: Option<String>,
    pub snapshot_date: Option<NaiveDate>,
    pub balances: Vec<(String, B)>,
}

impl<B> HolderSnapshot<B> {
    pub fn from_balances(balances: Vec<(String, B)>) -> Self {
        HolderSnapshot {
            chain: None,
            token_id: None,
            snapshot_date: None,
            balances,
        }
    }

    pub fn len(&self) -> usize {
        self.balances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balances.is_empty()
    }

    pub fn map<C>(self, mut f: impl FnMut(B) -> C) -> HolderSnapshot<C> {
        HolderSnapshot {
            chain: self.chain,
            token_id: self.token_id,
            snapshot_date: self.snapshot_date,
            balances: self.balances.into_iter().map(|(a, b)| (a, f(b))).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing header \"{HEADER}\" at line {0}")]
    MissingHeader(usize),
    #[error("empty snapshot body")]
    EmptyBody,
    #[error("negative balance at line {0}")]
    NegativeBalance(usize),
    #[error("invalid balance \"{value}\" at line {line}")]
    InvalidBalance { line: usize, value: String },
    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: usize, message: String },
    #[error("invalid {key} \"{value}\" at line {line}")]
    InvalidMetadata {
        line: usize,
        key: &'static str,
        value: String,
    },
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(String),
    #[error("degenerate snapshot: no positive balance")]
    Degenerate,
}

impl SnapshotError {
    pub fn is_finding(&self) -> bool {
        !matches!(self, SnapshotError::Io { .. })
    }
}

pub fn load_holder_snapshot(path: &Path) -> Result<HolderSnapshot<Balance>, SnapshotError> {
    let text = fs::read_to_string(path).map_err(|source| SnapshotError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_holder_snapshot(&text)
}

pub fn parse_holder_snapshot(text: &str) -> Result<HolderSnapshot<Balance>, SnapshotError> {
    let mut snap = HolderSnapshot::from_balances(Vec::new());
    let mut body_start = 0;
    let mut offset = 0;
    for (i, raw) in text.split_inclusive('\n').enumerate() {
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            read_metadata(comment, i + 1, &mut snap)?;
        } else if !trimmed.is_empty() {
            break;
        }
        offset += raw.len();
        body_start = i + 1;
    }
    let body = &text[offset..];

    let mut lines = body.lines();
    match lines.next().map(str::trim) {
        Some(h) if h.eq_ignore_ascii_case(HEADER) => {}
        Some(_) => return Err(SnapshotError::MissingHeader(body_start + 1)),
        None => return Err(SnapshotError::MissingHeader(body_start + 1)),
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(body.as_bytes());
    for record in reader.records() {
        let record = record.map_err(|e| SnapshotError::MalformedRow {
            line: body_start + e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = body_start + record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(SnapshotError::MalformedRow {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let raw = &record[1];
        let value = BigDecimal::from_str(raw).map_err(|_| SnapshotError::InvalidBalance {
            line,
            value: raw.to_string(),
        })?;
        if value < BigDecimal::zero() {
            return Err(SnapshotError::NegativeBalance(line));
        }
        snap.balances.push((record[0].to_string(), value));
    }
    if snap.balances.is_empty() {
        return Err(SnapshotError::EmptyBody);
    }
    if !snap.balances.iter().any(|(_, b)| *b > BigDecimal::zero()) {
        return Err(SnapshotError::Degenerate);
    }
    Ok(snap)
}

fn read_metadata<B>(
    comment: &str,
    line: usize,
    snap: &mut HolderSnapshot<B>,
) -> Result<(), SnapshotError> {
    for token in comment.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            continue;
        };
        match key {
            "chain" => snap.chain = Some(value.to_string()),
            "token_id" => snap.token_id = Some(value.to_string()),
            "snapshot_date" | "date" => {
                let date = NaiveDate::parse_from_str(value, "%Y-%m-%d").map_err(|_| {
                    SnapshotError::InvalidMetadata {
                        line,
                        key: "snapshot_date",
                        value: value.to_string(),
                    }
                })?;
                snap.snapshot_date = Some(date);
            }
            "version" => {
                let major = value.split('.').next().unwrap_or(value);
                if major.parse::<u32>() != Ok(SNAPSHOT_VERSION) {
                    return Err(SnapshotError::UnsupportedVersion(value.to_string()));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Renders a snapshot in the on-disk format, metadata first.
pub fn write_holder_snapshot<B: Display>(snap: &HolderSnapshot<B>) -> String {
    let mut out = String::new();
    let mut meta = vec![format!("version={SNAPSHOT_VERSION}")];
    if let Some(c) = &snap.chain {
        meta.push(format!("chain={c}"));
    }
    if let Some(t) = &snap.token_id {
        meta.push(format!("token_id={t}"));
    }
    if let Some(d) = snap.snapshot_date {
        meta.push(format!("snapshot_date={d}"));
    }
    out.push_str(&format!("# {}\n", meta.join(" ")));
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["address", "balance"])
        .expect("in-memory write");
    for (addr, b) in &snap.balances {
        w.write_record([addr.as_str(), &b.to_string()])
            .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&bytes).expect("utf-8 input"));
    out
}

impl<B: Display> Display for HolderSnapshot<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_holder_snapshot(self))
    }
}
