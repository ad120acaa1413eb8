//! Deterministic crypto-asset taxonomy engine.
//!
//! Validates asset descriptors, derives centralisation labels from a
//! critical-resource surface, assigns reference categories, legal
//! classifications and TradFi analogies with replayable decision traces,
//! and aggregates corpora into reports.

pub mod centralisation;
pub mod classification;
pub mod corpus;
pub mod model;
pub mod reporting;
pub mod scalar;

/// Market capitalisation in USD; used only for report colouring.
pub type MarketCap = f64;

/// Exact holder balance.
pub type Balance = bigdecimal::BigDecimal;

/// Holder snapshot with exact balances.
pub type Snapshot = corpus::HolderSnapshot<Balance>;

pub use centralisation::{CentralisationLabel, CriticalResourceSurface, Group, SubDimension};
pub use classification::{classify, DerivedClassification, ReferenceCategory, TradFiAnalogy};
pub use corpus::{load_corpus, load_holder_snapshot, Corpus, HolderSnapshot};
pub use model::{validate_descriptor, AssetDescriptor, LegalClassification, Strictness};
