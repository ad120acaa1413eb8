//! Descriptor corpora and holder snapshots on disk.

mod snapshot;

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use snapshot::{
    load_holder_snapshot, parse_holder_snapshot, write_holder_snapshot, HolderSnapshot,
    SnapshotError, SNAPSHOT_VERSION,
};

use crate::model::{
    nearest_literal, validate_batch, AssetDescriptor, Diagnostic, Strictness, ValidationReport,
};

pub const CORPUS_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub snapshot_date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub version: u64,
    pub assets: Vec<AssetDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl Corpus {
    pub fn new(assets: Vec<AssetDescriptor>) -> Self {
        Corpus {
            version: CORPUS_VERSION,
            assets,
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assets.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&AssetDescriptor> {
        self.assets.iter().find(|a| a.id == id)
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut AssetDescriptor> {
        self.assets.iter_mut().find(|a| a.id == id)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("corpus serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        fs::write(path, self.to_json_string()).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// A loaded corpus plus any non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported corpus version {0}")]
    UnsupportedVersion(String),
    #[error("invalid corpus:\n{0}")]
    Invalid(ValidationReport),
}

impl CorpusError {
    /// Data problems as opposed to I/O faults.
    pub fn is_finding(&self) -> bool {
        !matches!(self, CorpusError::Io { .. })
    }
}

pub fn load_corpus(path: &Path, mode: Strictness) -> Result<LoadedCorpus, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus_str(&text, mode)
}

const TOP_LEVEL_KEYS: &[&str] = &["version", "assets", "provenance"];

pub fn parse_corpus_str(text: &str, mode: Strictness) -> Result<LoadedCorpus, CorpusError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CorpusError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let version = raw.get("version");
    match version.and_then(Value::as_u64) {
        Some(CORPUS_VERSION) => {}
        _ => {
            let shown = version.map_or("missing".to_string(), Value::to_string);
            return Err(CorpusError::UnsupportedVersion(shown));
        }
    }

    let mut report = ValidationReport::default();
    let Some(obj) = raw.as_object() else {
        unreachable!("version lookup succeeded on an object");
    };
    for key in obj.keys().filter(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
        let hint = nearest_literal(key, TOP_LEVEL_KEYS)
            .map(|h| format!(" (did you mean \"{h}\"?)"))
            .unwrap_or_default();
        let d = Diagnostic::new(key, key, &format!("unknown key{hint}"));
        match mode {
            Strictness::Strict => report.errors.push(d),
            Strictness::Lenient => report.warnings.push(d),
        }
    }

    let provenance = match obj.get("provenance") {
        None | Some(Value::Null) => None,
        Some(p) => match serde_json::from_value::<Provenance>(p.clone()) {
            Ok(p) => Some(p),
            Err(e) => {
                report.errors.push(Diagnostic::new(
                    "provenance",
                    &p.to_string(),
                    &e.to_string(),
                ));
                None
            }
        },
    };

    let assets = match obj.get("assets") {
        Some(Value::Array(items)) => match validate_batch(items, "assets", mode) {
            Ok(v) => {
                report.warnings.extend(v.warnings);
                Some(v.value)
            }
            Err(r) => {
                report.errors.extend(r.errors);
                report.warnings.extend(r.warnings);
                None
            }
        },
        other => {
            let shown = other.map_or("missing".to_string(), Value::to_string);
            report
                .errors
                .push(Diagnostic::new("assets", &shown, "assets must be an array"));
            None
        }
    };

    match assets {
        Some(assets) if report.is_clean() => Ok(LoadedCorpus {
            corpus: Corpus {
                version: CORPUS_VERSION,
                assets,
                provenance,
            },
            warnings: report.warnings,
        }),
        _ => Err(CorpusError::Invalid(report)),
    }
}
