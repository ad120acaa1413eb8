use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand};

use crypto_taxonomy::centralisation::{assess_ownership, StructuralError};
use crypto_taxonomy::classification::classify;
use crypto_taxonomy::corpus::{CorpusError, LoadedCorpus, SnapshotError};
use crypto_taxonomy::reporting::{
    bucket_summary, classifications_json, parse_dimensions, ClassifiedCorpus, Dimension,
    ReportBundle, ReportError, DEFAULT_PATH_DIMENSIONS,
};
use crypto_taxonomy::{load_corpus, load_holder_snapshot, Balance, Strictness, SubDimension};

const OWNERSHIP_RESOURCE: &str = "on_chain_holder";

#[derive(Parser)]
#[command(name = "taxonomy", version, about = "Crypto-asset taxonomy toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file and print every diagnostic.
    Validate {
        corpus: PathBuf,
        #[command(flatten)]
        mode: Mode,
    },
    /// Derive labels for every asset and write classifications.json.
    Classify {
        corpus: PathBuf,
        /// Print decision traces and write traces/<id>.txt.
        #[arg(long)]
        explain: bool,
        #[arg(long, default_value = "taxonomy-out")]
        out: PathBuf,
        #[command(flatten)]
        mode: Mode,
    },
    /// Write the aggregate report bundle.
    Report {
        corpus: PathBuf,
        /// Ordered parallel-set dimensions, comma separated.
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value = "taxonomy-out")]
        out: PathBuf,
        #[command(flatten)]
        mode: Mode,
    },
    /// Compute top-holder concentration from a holder snapshot.
    Concentration {
        snapshot: PathBuf,
        #[arg(long, requires = "corpus")]
        asset: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Record the party count in a copy of the corpus.
        #[arg(long, requires_all = ["asset", "corpus"])]
        write_back: bool,
        /// With --write-back, replace the corpus file instead of writing a sibling.
        #[arg(long, requires = "write_back")]
        overwrite: bool,
        #[command(flatten)]
        mode: Mode,
    },
}

#[derive(Args)]
struct Mode {
    /// Unknown keys are errors.
    #[arg(long, env = "TAXONOMY_STRICT", value_parser = parse_flag, num_args = 0, default_missing_value = "true", default_value = "false")]
    strict: bool,
    /// Unknown keys are warnings (default); overrides TAXONOMY_STRICT.
    #[arg(long)]
    lenient: bool,
}

fn parse_flag(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "" | "0" | "false" | "no" | "off" => Ok(false),
        other => Err(format!("expected 1 or 0, got {other:?}")),
    }
}

impl Mode {
    fn strictness(&self) -> Strictness {
        if self.strict && !self.lenient {
            Strictness::Strict
        } else {
            Strictness::Lenient
        }
    }
}

/// Exit 1: the inputs contain data findings.
const FINDINGS: u8 = 1;
/// Exit 2: usage or I/O error.
const FAULT: u8 = 2;

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn findings(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: FINDINGS,
            error: error.into(),
        }
    }

    fn fault(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: FAULT,
            error: error.into(),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        if e.is_finding() {
            Failure::findings(e)
        } else {
            Failure::fault(e)
        }
    }
}

impl From<SnapshotError> for Failure {
    fn from(e: SnapshotError) -> Self {
        if e.is_finding() {
            Failure::findings(e)
        } else {
            Failure::fault(e)
        }
    }
}

impl From<StructuralError> for Failure {
    fn from(e: StructuralError) -> Self {
        Failure::findings(e)
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::fault(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { corpus, mode } => validate(&corpus, mode.strictness()),
        Command::Classify {
            corpus,
            explain,
            out,
            mode,
        } => classify_cmd(&corpus, explain, &out, mode.strictness()),
        Command::Report {
            corpus,
            dims,
            out,
            mode,
        } => report(&corpus, dims.as_deref(), &out, mode.strictness()),
        Command::Concentration {
            snapshot,
            asset,
            corpus,
            write_back,
            overwrite,
            mode,
        } => concentration(
            &snapshot,
            asset.as_deref(),
            corpus.as_deref(),
            write_back,
            overwrite,
            mode.strictness(),
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn print_warnings(loaded: &LoadedCorpus) {
    for w in &loaded.warnings {
        println!("warning: {w}");
    }
}

fn validate(path: &Path, mode: Strictness) -> CmdResult {
    match load_corpus(path, mode) {
        Ok(loaded) => {
            print_warnings(&loaded);
            println!("{} assets valid", loaded.corpus.len());
            Ok(0)
        }
        Err(CorpusError::Invalid(report)) => {
            print!("{report}");
            println!("{} error(s)", report.errors.len());
            Ok(FINDINGS)
        }
        Err(e) => Err(e.into()),
    }
}

fn load(path: &Path, mode: Strictness) -> Result<LoadedCorpus, Failure> {
    match load_corpus(path, mode) {
        Err(CorpusError::Invalid(report)) => {
            print!("{report}");
            Err(Failure::findings(anyhow!(
                "{} invalid: {} error(s)",
                path.display(),
                report.errors.len()
            )))
        }
        other => Ok(other?),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body)
        .map_err(|e| Failure::fault(anyhow!("cannot write {}: {e}", path.display())))
}

fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path)
        .map_err(|e| Failure::fault(anyhow!("cannot create {}: {e}", path.display())))
}

fn classify_cmd(path: &Path, explain: bool, out: &Path, mode: Strictness) -> CmdResult {
    let loaded = load(path, mode)?;
    print_warnings(&loaded);
    let records = loaded
        .corpus
        .assets
        .iter()
        .map(classify)
        .collect::<Result<Vec<_>, _>>()?;

    create_dir(out)?;
    write_file(
        &out.join("classifications.json"),
        &classifications_json(&records),
    )?;
    if explain {
        create_dir(&out.join("traces"))?;
    }

    let mut findings = false;
    for c in &records {
        println!("{}", c.summary_line());
        for flag in &c.flags {
            println!("  flag {flag}");
        }
        findings |= c.has_findings();
        if explain {
            let mut text = c.trace.lines().join("\n");
            text.push('\n');
            for line in c.trace.lines() {
                println!("    {line}");
            }
            write_file(&out.join("traces").join(format!("{}.txt", c.id)), &text)?;
        }
    }
    Ok(if findings { FINDINGS } else { 0 })
}

fn report(path: &Path, dims: Option<&str>, out: &Path, mode: Strictness) -> CmdResult {
    let dims: Vec<Dimension> = match dims {
        Some(list) => parse_dimensions(list).map_err(Failure::fault)?,
        None => DEFAULT_PATH_DIMENSIONS.to_vec(),
    };
    let loaded = load(path, mode)?;
    print_warnings(&loaded);
    let classified = ClassifiedCorpus::classify(&loaded.corpus)?;
    let bundle = ReportBundle::build(&classified, &dims).map_err(Failure::fault)?;
    bundle.write(out)?;
    for table in &bundle.buckets {
        println!("{}: {}", table.dimension, bucket_summary(table));
    }
    Ok(0)
}

fn concentration(
    snapshot: &Path,
    asset: Option<&str>,
    corpus_path: Option<&Path>,
    write_back: bool,
    overwrite: bool,
    mode: Strictness,
) -> CmdResult {
    let snap = load_holder_snapshot(snapshot)?;
    let balances: Vec<Balance> = snap.balances.iter().map(|(_, b)| b.clone()).collect();
    let assessment = assess_ownership(&balances).map_err(Failure::findings)?;
    let parties = assessment
        .parties
        .map_or("unbounded".to_string(), |n| n.to_string());
    println!(
        "top_share={:.2}% parties={parties}",
        assessment.top_share_percent()
    );

    let (Some(id), Some(corpus_path)) = (asset, corpus_path) else {
        return Ok(0);
    };
    let mut loaded = load(corpus_path, mode)?;
    let descriptor = loaded.corpus.get_mut(id).ok_or_else(|| {
        Failure::fault(anyhow!("asset {id} not found in {}", corpus_path.display()))
    })?;
    if !write_back {
        return Ok(0);
    }
    descriptor
        .critical_resource_surface
        .get_or_insert_with(Default::default)
        .set(
            SubDimension::MarketOwnership,
            OWNERSHIP_RESOURCE,
            assessment.parties,
        );
    let target = if overwrite {
        corpus_path.to_path_buf()
    } else {
        sibling(corpus_path)
    };
    loaded.corpus.save(&target).map_err(Failure::fault)?;
    println!("wrote {}", target.display());
    Ok(0)
}

/// `dir/name.json` becomes `dir/name.updated.json`.
fn sibling(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    path.with_file_name(format!("{stem}.updated.json"))
}
