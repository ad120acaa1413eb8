//! Facet vocabularies, the asset descriptor record, and structural validation.

pub mod descriptor;
pub mod facets;
pub mod validate;

pub use descriptor::{
    AifProngs, AssetDescriptor, AssetRef, HoweyProngs, LegalTestInputs, Metadata, MifidProngs,
    PublishedLabels,
};
pub use facets::{
    facet_universe, nearest_literal, AssetFunction, DistributionMechanism, Facet, FacetVocabulary,
    FormOfClaim, IssuerKind, LegalClassification, MintingType, RedemptionMechanism,
    TechnicalStandard, TechnicalStandardKind, UnknownLiteral, YieldSource,
};
pub use validate::{
    validate_batch, validate_descriptor, Diagnostic, Strictness, Validated, ValidationReport,
};
