use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{
    bucket_table, facet_distribution, parallel_set_paths, BucketTable, ClassifiedCorpus, Dimension,
    FacetDistribution, ParallelSets, TooFewDimensions, UNCLASSIFIED,
};
use crate::classification::DerivedClassification;

/// Path dimensions used when none are requested.
pub const DEFAULT_PATH_DIMENSIONS: &[Dimension] = &[
    Dimension::IssuerKind,
    Dimension::MintingType,
    Dimension::Function,
];

const BUCKET_DIMENSIONS: &[Dimension] = &[Dimension::Centralisation, Dimension::TradFiAnalogy];

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Dimensions(#[from] TooFewDimensions),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Everything written to a report directory.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub total: usize,
    pub distributions: Vec<FacetDistribution>,
    pub buckets: Vec<BucketTable>,
    pub parallel_sets: ParallelSets,
    pub classifications: Vec<DerivedClassification>,
}

impl ReportBundle {
    pub fn build(
        corpus: &ClassifiedCorpus,
        path_dims: &[Dimension],
    ) -> Result<Self, TooFewDimensions> {
        Ok(ReportBundle {
            total: corpus.len(),
            distributions: Dimension::ALL
                .iter()
                .map(|d| facet_distribution(corpus, *d))
                .collect(),
            buckets: BUCKET_DIMENSIONS
                .iter()
                .map(|d| bucket_table(corpus, *d))
                .collect(),
            parallel_sets: parallel_set_paths(corpus, path_dims)?,
            classifications: corpus.derived().cloned().collect(),
        })
    }

    pub fn buckets_for(&self, dim: Dimension) -> Option<&BucketTable> {
        self.buckets.iter().find(|b| b.dimension == dim)
    }

    pub fn distributions_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["dimension", "value", "count"])
            .expect("in-memory write");
        for dist in &self.distributions {
            for (value, count) in &dist.counts {
                w.write_record([dist.dimension.name(), value, &count.to_string()])
                    .expect("in-memory write");
            }
        }
        into_string(w)
    }

    pub fn buckets_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["dimension", "bucket", "asset_id"])
            .expect("in-memory write");
        for table in &self.buckets {
            for (bucket, ids) in &table.buckets {
                for id in ids {
                    w.write_record([table.dimension.name(), bucket, id])
                        .expect("in-memory write");
                }
            }
        }
        into_string(w)
    }

    pub fn parallel_sets_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = self
            .parallel_sets
            .dimensions
            .iter()
            .map(|d| d.name())
            .collect();
        header.extend(["count", "colour_value"]);
        w.write_record(&header).expect("in-memory write");
        for path in &self.parallel_sets.paths {
            let mut row: Vec<String> = path.values.iter().map(|v| v.to_string()).collect();
            row.push(path.count.to_string());
            row.push(format_colour(path.colour_value));
            w.write_record(&row).expect("in-memory write");
        }
        into_string(w)
    }

    pub fn classifications_json(&self) -> String {
        classifications_json(&self.classifications)
    }

    pub fn summary_md(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Corpus report\n\nAssets: {}\n", self.total);
        for table in &self.buckets {
            let _ = writeln!(s, "## Buckets: {}\n", table.dimension);
            let _ = writeln!(s, "| bucket | count | assets |\n|---|---:|---|");
            for (bucket, ids) in &table.buckets {
                let _ = writeln!(s, "| {bucket} | {} | {} |", ids.len(), ids.join(", "));
            }
            s.push('\n');
        }
        let dims: Vec<&str> = self
            .parallel_sets
            .dimensions
            .iter()
            .map(|d| d.name())
            .collect();
        let _ = writeln!(s, "## Parallel sets: {}\n", dims.join(" > "));
        let _ = writeln!(
            s,
            "| {} | count | colour_value |\n|{}---:|---:|",
            dims.join(" | "),
            "---|".repeat(dims.len())
        );
        for path in &self.parallel_sets.paths {
            let _ = writeln!(
                s,
                "| {} | {} | {} |",
                path.values.join(" | "),
                path.count,
                format_colour(path.colour_value)
            );
        }
        if !self.parallel_sets.excluded.is_empty() {
            let _ = writeln!(s, "\nExcluded: {}", self.parallel_sets.excluded.join(", "));
        }
        s.push('\n');
        let _ = writeln!(s, "## Distributions\n");
        for dist in &self.distributions {
            let _ = writeln!(s, "### {}\n", dist.dimension);
            let _ = writeln!(s, "| value | count | share |\n|---|---:|---:|");
            for (value, count) in &dist.counts {
                let _ = writeln!(s, "| {value} | {count} | {} |", share(*count, dist.total));
            }
            s.push('\n');
        }
        s
    }

    /// Writes the five bundle files into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
        fs::create_dir_all(dir).map_err(|source| ReportError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let files = [
            ("distributions.csv", self.distributions_csv()),
            ("buckets.csv", self.buckets_csv()),
            ("parallel_sets.csv", self.parallel_sets_csv()),
            ("classifications.json", self.classifications_json()),
            ("summary.md", self.summary_md()),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| ReportError::Io {
                path: path.clone(),
                source,
            })?;
            written.push(path);
        }
        Ok(written)
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn format_colour(v: Option<f64>) -> String {
    v.map(|c| format!("{c:.6}")).unwrap_or_default()
}

fn share(count: usize, total: usize) -> String {
    if total == 0 {
        "-".to_string()
    } else {
        format!("{:.1}%", count as f64 * 100.0 / total as f64)
    }
}

/// Per-asset classification records as pretty JSON with a trailing newline.
pub fn classifications_json(records: &[DerivedClassification]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("classifications serialize");
    s.push('\n');
    s
}

/// `bucket:count` pairs; the unclassified bucket appears only when non-empty.
pub fn bucket_summary(table: &BucketTable) -> String {
    table
        .buckets
        .iter()
        .filter(|(b, ids)| *b != UNCLASSIFIED || !ids.is_empty())
        .map(|(b, ids)| format!("{b}:{}", ids.len()))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::model::AssetDescriptor;

    fn small() -> ClassifiedCorpus {
        let mut b = AssetDescriptor::bare("b", "B");
        b.critical_resource_surface = None;
        ClassifiedCorpus::classify(&Corpus::new(vec![AssetDescriptor::bare("a", "A"), b])).unwrap()
    }

    #[test]
    fn summary_line_hides_empty_unclassified() {
        let c = ClassifiedCorpus::classify(&Corpus::new(vec![AssetDescriptor::bare("a", "A")]))
            .unwrap();
        let t = super::super::bucket_table(&c, Dimension::Centralisation);
        assert_eq!(bucket_summary(&t), "decentralised:1 hybrid:0 centralised:0");
        let t = super::super::bucket_table(&small(), Dimension::Centralisation);
        assert_eq!(
            bucket_summary(&t),
            "decentralised:1 hybrid:0 centralised:0 unclassified:1"
        );
    }

    #[test]
    fn csv_headers() {
        let r = ReportBundle::build(&small(), DEFAULT_PATH_DIMENSIONS).unwrap();
        assert!(r.distributions_csv().starts_with("dimension,value,count\n"));
        assert!(r.buckets_csv().starts_with("dimension,bucket,asset_id\n"));
        assert!(r
            .parallel_sets_csv()
            .starts_with("issuer_kind,minting_type,function,count,colour_value\n"));
        assert!(r.buckets_csv().contains("centralisation,unclassified,b\n"));
    }

    #[test]
    fn writes_bundle() {
        let dir = tempfile::tempdir().unwrap();
        let r = ReportBundle::build(&small(), DEFAULT_PATH_DIMENSIONS).unwrap();
        let files = r.write(dir.path()).unwrap();
        assert_eq!(files.len(), 5);
        for f in files {
            assert!(f.exists());
        }
    }
}
