//! Corpus-level aggregation: facet distributions, bucket tables and
//! parallel-set paths.

mod bundle;
mod dimension;

use std::collections::BTreeMap;

use serde::Serialize;

pub use bundle::{
    bucket_summary, classifications_json, ReportBundle, ReportError, DEFAULT_PATH_DIMENSIONS,
};
pub use dimension::{parse_dimensions, Dimension, UnknownDimension, UNCLASSIFIED};

use crate::centralisation::StructuralError;
use crate::classification::{classify, DerivedClassification};
use crate::corpus::Corpus;
use crate::model::AssetDescriptor;
use crate::scalar::log10_mean;
use crate::MarketCap;

/// A descriptor paired with its derived labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedAsset {
    pub descriptor: AssetDescriptor,
    pub derived: DerivedClassification,
}

impl ClassifiedAsset {
    pub fn value(&self, dim: Dimension) -> Option<&'static str> {
        dim.value(&self.descriptor, &self.derived)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassifiedCorpus {
    pub assets: Vec<ClassifiedAsset>,
}

impl ClassifiedCorpus {
    pub fn classify(corpus: &Corpus) -> Result<Self, StructuralError> {
        let assets = corpus
            .assets
            .iter()
            .map(|d| {
                Ok(ClassifiedAsset {
                    descriptor: d.clone(),
                    derived: classify(d)?,
                })
            })
            .collect::<Result<_, StructuralError>>()?;
        Ok(ClassifiedCorpus { assets })
    }

    pub fn len(&self) -> usize {
        self.assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assets.is_empty()
    }

    pub fn derived(&self) -> impl Iterator<Item = &DerivedClassification> {
        self.assets.iter().map(|a| &a.derived)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetDistribution {
    pub dimension: Dimension,
    /// Every universe value in order, then `unclassified` when non-zero.
    pub counts: Vec<(&'static str, usize)>,
    pub total: usize,
}

impl FacetDistribution {
    pub fn count(&self, value: &str) -> usize {
        self.counts
            .iter()
            .find(|(v, _)| *v == value)
            .map_or(0, |(_, n)| *n)
    }
}

pub fn facet_distribution(corpus: &ClassifiedCorpus, dim: Dimension) -> FacetDistribution {
    let mut counts: Vec<(&'static str, usize)> =
        dim.universe().into_iter().map(|v| (v, 0)).collect();
    let mut missing = 0;
    for a in &corpus.assets {
        match a.value(dim) {
            Some(v) => {
                if let Some(slot) = counts.iter_mut().find(|(u, _)| *u == v) {
                    slot.1 += 1;
                }
            }
            None => missing += 1,
        }
    }
    if missing > 0 {
        counts.push((UNCLASSIFIED, missing));
    }
    FacetDistribution {
        dimension: dim,
        counts,
        total: corpus.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BucketTable {
    pub dimension: Dimension,
    /// Universe buckets in order, then the `unclassified` bucket.
    pub buckets: Vec<(&'static str, Vec<String>)>,
}

impl BucketTable {
    pub fn bucket(&self, name: &str) -> Option<&[String]> {
        self.buckets
            .iter()
            .find(|(b, _)| *b == name)
            .map(|(_, ids)| ids.as_slice())
    }

    pub fn total(&self) -> usize {
        self.buckets.iter().map(|(_, ids)| ids.len()).sum()
    }
}

/// Places every asset in exactly one bucket, keeping corpus order within
/// each bucket.
pub fn bucket_table(corpus: &ClassifiedCorpus, dim: Dimension) -> BucketTable {
    let mut buckets: Vec<(&'static str, Vec<String>)> = dim
        .universe()
        .into_iter()
        .map(|v| (v, Vec::new()))
        .collect();
    buckets.push((UNCLASSIFIED, Vec::new()));
    for a in &corpus.assets {
        let key = a.value(dim).unwrap_or(UNCLASSIFIED);
        if let Some((_, ids)) = buckets.iter_mut().find(|(b, _)| *b == key) {
            ids.push(a.descriptor.id.clone());
        }
    }
    BucketTable {
        dimension: dim,
        buckets,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelSetPath {
    pub values: Vec<&'static str>,
    pub count: usize,
    /// `log10` of the mean positive market cap of the members.
    pub colour_value: Option<MarketCap>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelSets {
    pub dimensions: Vec<Dimension>,
    pub paths: Vec<ParallelSetPath>,
    /// Ids of assets lacking a value on some dimension.
    pub excluded: Vec<String>,
}

impl ParallelSets {
    pub fn path_total(&self) -> usize {
        self.paths.iter().map(|p| p.count).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parallel sets need at least 2 dimensions, got {0}")]
pub struct TooFewDimensions(pub usize);

/// Groups assets by their value tuple along `dims`. Paths are ordered by the
/// universe order of each dimension in turn.
/// Path values, member market caps, member count.
type PathGroup = (Vec<&'static str>, Vec<MarketCap>, usize);

pub fn parallel_set_paths(
    corpus: &ClassifiedCorpus,
    dims: &[Dimension],
) -> Result<ParallelSets, TooFewDimensions> {
    if dims.len() < 2 {
        return Err(TooFewDimensions(dims.len()));
    }
    let mut groups: BTreeMap<Vec<usize>, PathGroup> = BTreeMap::new();
    let mut excluded = Vec::new();
    for a in &corpus.assets {
        let values: Option<Vec<&'static str>> = dims.iter().map(|d| a.value(*d)).collect();
        let Some(values) = values else {
            excluded.push(a.descriptor.id.clone());
            continue;
        };
        let key: Vec<usize> = dims
            .iter()
            .zip(&values)
            .map(|(d, v)| d.ordinal(v))
            .collect();
        let entry = groups.entry(key).or_insert_with(|| (values, Vec::new(), 0));
        entry.2 += 1;
        if let Some(cap) = a.descriptor.market_cap() {
            entry.1.push(cap);
        }
    }
    let paths = groups
        .into_values()
        .map(|(values, caps, count)| ParallelSetPath {
            values,
            count,
            colour_value: log10_mean(caps),
        })
        .collect();
    Ok(ParallelSets {
        dimensions: dims.to_vec(),
        paths,
        excluded,
    })
}
