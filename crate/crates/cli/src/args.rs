use std::path::PathBuf;

use clap::builder::TypedValueParser as _;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "semnet", version, about = "Semantic co-occurrence networks from game reviews")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download reviews for one app and store them as a JSONL corpus.
    Fetch(FetchArgs),
    /// Clean a corpus into a document store.
    Clean(CleanArgs),
    /// Build a co-occurrence graph.
    Graph(GraphArgs),
    /// Compute metrics, communities and sentiment into a report.
    Analyze(AnalyzeArgs),
    /// Compare two reports.
    Compare(CompareArgs),
    /// Write GEXF, CSV and JSON files for a graph and its metrics.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub app_id: u32,
    /// First day to keep, YYYY-MM-DD (UTC).
    #[arg(long)]
    pub from: Option<String>,
    /// Last day to keep, YYYY-MM-DD (UTC, inclusive).
    #[arg(long)]
    pub to: Option<String>,
    /// ISO 639-1 language code.
    #[arg(long, default_value = "en")]
    pub language: String,
    #[arg(long, default_value_t = semnet::corpus::DEFAULT_MIN_CHARS)]
    pub min_chars: usize,
    #[arg(long, default_value_t = 100)]
    pub page_limit: usize,
    #[arg(long, default_value_t = 5)]
    pub max_retries: u32,
    #[arg(long, default_value = semnet::corpus::DEFAULT_ENDPOINT)]
    pub endpoint: String,
    /// Corpus file to write; the manifest goes next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Reviews with at most this many characters are dropped.
    #[arg(long, default_value_t = semnet::corpus::DEFAULT_MIN_CHARS)]
    pub min_chars: usize,
    #[arg(long, default_value_t = semnet::text::DEFAULT_MIN_TOKEN_LEN)]
    pub min_token_len: usize,
    /// Replaces the built-in function-word stop-list.
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    /// Replaces the built-in technical-noise stop-list.
    #[arg(long)]
    pub technical_stoplist: Option<PathBuf>,
    /// Replaces the built-in conflation lexicon.
    #[arg(long)]
    pub conflation: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Window size in sentences.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..).map(|w| w as usize))]
    pub window: usize,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_node_freq: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_edge_weight: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weighting {
    Weighted,
    Unweighted,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sentiment lexicon, `lemma<TAB>valence` per line.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Identity term sets, `name: term, term` per line.
    #[arg(long)]
    pub identity_sets: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Weighting::Weighted)]
    pub modularity: Weighting,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..).map(|k| k as usize))]
    pub top_k: usize,
    #[arg(long)]
    pub normalize_betweenness: bool,
    /// Name used in reports; defaults to the input file stem.
    #[arg(long)]
    pub label: Option<String>,
}

/// Where the pipeline starts. A later stage wins over an earlier one.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus JSONL with manifest, from `fetch`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Document store, from `clean`.
    #[arg(long)]
    pub documents: Option<PathBuf>,
    /// Graph file, from `graph`; needs --documents for sentiment.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CleanArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub documents: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub build: BuildArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub build: BuildArgs,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    /// Report file; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Also write the comparison as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Gexf,
    Csv,
    Json,
    All,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub build: BuildArgs,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    #[arg(long, value_enum, default_value_t = Format::All)]
    pub format: Format,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}
