//! Per-corpus network reports.
//!
//! [`build_report`] runs the whole pipeline over a review corpus: substantive
//! filter, cleaning, co-occurrence graph, metrics, sentiment. The resulting
//! [`NetworkReport`] serializes to JSON byte-identically for identical inputs
//! and seed; metrics that cannot be computed are carried as
//! [`MetricValue::Undefined`] with a reason instead of failing the run.

mod compare;
mod export;

pub use compare::{compare, render_comparison, ComparativeReport, NetworkTypeLabels, RelativeDensity};
pub use export::{export_csv_tables, export_gexf, export_json, read_edges_csv, write_gexf, GraphView};

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cooccur::{build_graph, count_cooccurrences, BuildError, GraphBuildConfig};
use crate::corpus::{filter_substantive, CollectionWindow, CorpusManifest, Provenance, RawReview};
use crate::graph::SemanticGraph;
use crate::metrics::{
    average_path_length, betweenness_centrality, bridging_concepts, degree_centrality, density,
    largest_component, louvain_with, BridgingConcept, CentralityTable, CommunityPartition,
    EdgeWeighting, LouvainConfig,
};
use crate::sentiment::{
    community_sentiment, identity_alignment, IdentityTermSet, SentimentLexicon, ValenceBands,
};
use crate::text::{clean_document, Document, PipelineConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("empty corpus: {0}")]
    EmptyCorpus(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {what}: {detail}")]
    Malformed { what: String, detail: String },
}

/// A metric value, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MetricValue {
    Defined { value: f64 },
    Undefined { reason: String },
}

impl MetricValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            MetricValue::Defined { value } => Some(*value),
            MetricValue::Undefined { .. } => None,
        }
    }

    pub fn defined(value: f64) -> Self {
        MetricValue::Defined { value }
    }

    pub fn undefined(reason: impl Into<String>) -> Self {
        MetricValue::Undefined {
            reason: reason.into(),
        }
    }
}

impl<E: std::fmt::Display> From<Result<f64, E>> for MetricValue {
    fn from(r: Result<f64, E>) -> Self {
        match r {
            Ok(v) => MetricValue::defined(v),
            Err(e) => MetricValue::undefined(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub min_chars: usize,
    pub resolution: f64,
    pub seed: u64,
    pub modularity_weighting: EdgeWeighting,
    pub top_k: usize,
    pub normalize_betweenness: bool,
    pub valence_bands: ValenceBands,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            min_chars: crate::corpus::DEFAULT_MIN_CHARS,
            resolution: 1.0,
            seed: 0,
            modularity_weighting: EdgeWeighting::Weighted,
            top_k: 25,
            normalize_betweenness: false,
            valence_bands: ValenceBands::default(),
        }
    }
}

/// Where each data resource came from; `"builtin"` for the bundled files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceSources {
    pub standard_stoplist: String,
    pub technical_stoplist: String,
    pub conflation_lexicon: String,
    pub sentiment_lexicon: String,
    pub identity_sets: String,
}

impl Default for ResourceSources {
    fn default() -> Self {
        let b = || "builtin".to_string();
        Self {
            standard_stoplist: b(),
            technical_stoplist: b(),
            conflation_lexicon: b(),
            sentiment_lexicon: b(),
            identity_sets: b(),
        }
    }
}

/// Everything besides the reviews that determines a report.
#[derive(Debug, Clone)]
pub struct ReportInputs {
    pub label: String,
    pub pipeline: PipelineConfig,
    pub graph: GraphBuildConfig,
    pub analysis: AnalysisConfig,
    pub lexicon: SentimentLexicon,
    pub identity_sets: Vec<IdentityTermSet>,
    pub sources: ResourceSources,
    /// Cleaning settings recorded by an earlier stage; when set, they are
    /// echoed instead of `pipeline`.
    pub upstream: Option<PipelineEcho>,
    /// Settings recorded in the provenance block (e.g. the command line).
    pub provenance: Provenance,
}

impl Default for ReportInputs {
    fn default() -> Self {
        Self {
            label: "corpus".into(),
            pipeline: PipelineConfig::default(),
            graph: GraphBuildConfig::default(),
            analysis: AnalysisConfig::default(),
            lexicon: SentimentLexicon::shipped(),
            identity_sets: IdentityTermSet::shipped(),
            sources: ResourceSources::default(),
            upstream: None,
            provenance: Provenance::current(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub app_id: Option<u32>,
    pub collection_window: Option<CollectionWindow>,
    pub review_count_raw: Option<usize>,
    /// Reviews handed to the analysis.
    pub reviews_in: usize,
    /// Reviews passing the substantive-content filter.
    pub reviews_substantive: usize,
    /// Documents with at least one sentence after cleaning.
    pub documents_non_empty: usize,
}

impl CorpusSummary {
    pub fn new(manifest: Option<&CorpusManifest>, reviews_in: usize, documents: &[Document]) -> Self {
        Self {
            app_id: manifest.map(|m| m.app_id),
            collection_window: manifest.map(|m| m.collection_window),
            review_count_raw: manifest.map(|m| m.review_count_raw),
            reviews_in,
            reviews_substantive: documents.len(),
            documents_non_empty: documents.iter().filter(|d| !d.is_empty()).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEcho {
    pub source: String,
    pub entries: usize,
    pub sha256: String,
}

impl ResourceEcho {
    fn of(source: &str, lines: impl IntoIterator<Item = String>) -> Self {
        let mut hasher = Sha256::new();
        let mut entries = 0;
        for line in lines {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
            entries += 1;
        }
        let digest = hasher.finalize();
        Self {
            source: source.to_owned(),
            entries,
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Settings of the cleaning stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineEcho {
    pub min_chars: usize,
    pub min_token_len: usize,
    pub standard_stoplist: ResourceEcho,
    pub technical_stoplist: ResourceEcho,
    pub technical_stoplist_entries: Vec<String>,
    pub conflation_lexicon: ResourceEcho,
}

impl PipelineEcho {
    pub fn of(p: &PipelineConfig, min_chars: usize, sources: &ResourceSources) -> Self {
        let owned = |it: &mut dyn Iterator<Item = &str>| it.map(str::to_owned).collect::<Vec<_>>();
        Self {
            min_chars,
            min_token_len: p.min_token_len,
            standard_stoplist: ResourceEcho::of(
                &sources.standard_stoplist,
                owned(&mut p.standard_stoplist.iter()),
            ),
            technical_stoplist: ResourceEcho::of(
                &sources.technical_stoplist,
                owned(&mut p.technical_stoplist.iter()),
            ),
            technical_stoplist_entries: owned(&mut p.technical_stoplist.iter()),
            conflation_lexicon: ResourceEcho::of(
                &sources.conflation_lexicon,
                p.conflation_lexicon.iter().map(|(k, v)| format!("{k} {v}")),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub pipeline: PipelineEcho,
    pub graph: GraphBuildConfig,
    pub analysis: AnalysisConfig,
    pub sentiment_lexicon: ResourceEcho,
    pub identity_sets: Vec<IdentityTermSet>,
    pub identity_sets_source: String,
}

/// How each metric treats edge weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricModes {
    pub density: String,
    pub path_length: String,
    pub betweenness: String,
    pub modularity: String,
    pub community_detection: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: u64,
    pub density: MetricValue,
    pub average_path_length: MetricValue,
    pub largest_component_nodes: usize,
    pub modularity: MetricValue,
    pub communities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub lemma: String,
    pub score: f64,
    pub community: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySummary {
    pub id: u32,
    pub size: usize,
    /// Most frequent member lemmas.
    pub top_lemmas: Vec<String>,
    pub mean_valence: Option<f64>,
    pub valence_label: Option<String>,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub name: String,
    pub terms: Vec<String>,
    pub matching_docs: usize,
    pub scored_docs: usize,
    pub mean_valence: Option<f64>,
    pub valence_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub schema_version: u32,
    pub label: String,
    pub provenance: Provenance,
    pub corpus: CorpusSummary,
    pub config: Option<ConfigEcho>,
    pub metric_modes: MetricModes,
    pub topology: Topology,
    pub top_degree: Vec<RankedNode>,
    pub top_betweenness: Vec<RankedNode>,
    pub bridging_concepts: Vec<BridgingConcept>,
    pub communities: Vec<CommunitySummary>,
    pub identity_alignment: Vec<IdentityRow>,
}

impl NetworkReport {
    /// A report that carries only headline topology figures, e.g. values
    /// taken from a publication, so they can be fed to [`compare`].
    pub fn from_topology(
        label: impl Into<String>,
        density: f64,
        average_path_length: f64,
        modularity: f64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            label: label.into(),
            provenance: Provenance::current().with("kind", "topology-only"),
            corpus: CorpusSummary {
                app_id: None,
                collection_window: None,
                review_count_raw: None,
                reviews_in: 0,
                reviews_substantive: 0,
                documents_non_empty: 0,
            },
            config: None,
            metric_modes: MetricModes::for_config(&AnalysisConfig::default()),
            topology: Topology {
                nodes: 0,
                edges: 0,
                total_weight: 0,
                density: MetricValue::defined(density),
                average_path_length: MetricValue::defined(average_path_length),
                largest_component_nodes: 0,
                modularity: MetricValue::defined(modularity),
                communities: 0,
            },
            top_degree: Vec::new(),
            top_betweenness: Vec::new(),
            bridging_concepts: Vec::new(),
            communities: Vec::new(),
            identity_alignment: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let report: Self = serde_json::from_str(text).map_err(|e| ReportError::Malformed {
            what: "report".into(),
            detail: e.to_string(),
        })?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(ReportError::Malformed {
                what: "report".into(),
                detail: format!(
                    "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                    report.schema_version
                ),
            });
        }
        Ok(report)
    }
}

impl MetricModes {
    fn for_config(cfg: &AnalysisConfig) -> Self {
        let weighting = match cfg.modularity_weighting {
            EdgeWeighting::Weighted => "weighted",
            EdgeWeighting::Unweighted => "unweighted",
        };
        Self {
            density: "unweighted edge count, 2E/(V(V-1))".into(),
            path_length: "unweighted hops, largest connected component".into(),
            betweenness: if cfg.normalize_betweenness {
                "unweighted hops, normalized by (V-1)(V-2)/2".into()
            } else {
                "unweighted hops, unnormalized".into()
            },
            modularity: format!("{weighting} Newman modularity"),
            community_detection: format!(
                "Louvain, {weighting}, resolution {}, seed {}",
                cfg.resolution, cfg.seed
            ),
        }
    }
}

/// Report plus the intermediate artifacts needed for exports.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: NetworkReport,
    pub documents: Vec<Document>,
    pub graph: SemanticGraph,
    pub partition: CommunityPartition,
    pub degree: CentralityTable,
    pub betweenness: CentralityTable,
}

impl Analysis {
    pub fn view(&self) -> GraphView<'_> {
        GraphView {
            graph: &self.graph,
            partition: &self.partition,
            degree: &self.degree,
            betweenness: &self.betweenness,
        }
    }
}

/// Substantive filter followed by cleaning, in corpus order.
pub fn clean_corpus(
    reviews: &[RawReview],
    pipeline: &PipelineConfig,
    min_chars: usize,
) -> Vec<Document> {
    reviews
        .par_iter()
        .filter(|r| filter_substantive(r, min_chars))
        .map(|r| clean_document(r, pipeline))
        .collect()
}

pub fn build_report(
    reviews: &[RawReview],
    manifest: Option<&CorpusManifest>,
    inputs: &ReportInputs,
) -> Result<Analysis, ReportError> {
    inputs.graph.validate()?;
    let documents = clean_corpus(reviews, &inputs.pipeline, inputs.analysis.min_chars);
    let summary = CorpusSummary::new(manifest, reviews.len(), &documents);
    analyze_documents(documents, None, summary, inputs)
}

/// Runs the graph, metric and sentiment stages over cleaned documents. A
/// prebuilt graph is used as-is; otherwise one is built from the documents.
pub fn analyze_documents(
    documents: Vec<Document>,
    graph: Option<SemanticGraph>,
    summary: CorpusSummary,
    inputs: &ReportInputs,
) -> Result<Analysis, ReportError> {
    let cfg = &inputs.analysis;
    if documents.iter().all(Document::is_empty) {
        return Err(ReportError::EmptyCorpus(format!(
            "none of {} documents has any content left after filtering and cleaning",
            documents.len()
        )));
    }
    let graph = match graph {
        Some(g) => g,
        None => {
            let counts = count_cooccurrences(&documents, inputs.graph.window_sentences);
            build_graph(&counts, &inputs.graph)?
        }
    };

    let partition = louvain_with(
        &graph,
        &LouvainConfig {
            resolution: cfg.resolution,
            seed: cfg.seed,
            weighting: cfg.modularity_weighting,
        },
    );
    let degree = degree_centrality(&graph);
    let mut betweenness = betweenness_centrality(&graph);
    let v = graph.node_count();
    if cfg.normalize_betweenness && v > 2 {
        let pairs = ((v - 1) * (v - 2)) as f64 / 2.0;
        let scores = betweenness.scores.iter().map(|s| s / pairs).collect();
        betweenness = CentralityTable::new(&graph, "betweenness", scores);
    }

    let modularity = if graph.edge_count() == 0 {
        MetricValue::undefined("graph has no edges")
    } else {
        MetricValue::defined(partition.modularity)
    };
    let topology = Topology {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        total_weight: graph.total_weight(),
        density: density(&graph).into(),
        average_path_length: average_path_length(&graph).into(),
        largest_component_nodes: largest_component(&graph).len(),
        modularity,
        communities: partition.community_count(),
    };

    let ranked = |t: &CentralityTable| -> Vec<RankedNode> {
        t.ranking
            .iter()
            .take(cfg.top_k)
            .map(|&id| RankedNode {
                lemma: graph.lemma(id).to_owned(),
                score: t.score(id),
                community: partition.community_of(id),
            })
            .collect()
    };
    let top_degree = ranked(&degree);
    let top_betweenness = ranked(&betweenness);
    let bridges = bridging_concepts(&graph, &partition, &betweenness, cfg.top_k);

    let sentiment = community_sentiment(&documents, &graph, &partition, &inputs.lexicon);
    let communities = partition
        .members()
        .into_iter()
        .enumerate()
        .map(|(c, mut members)| {
            members.sort_by(|&a, &b| {
                graph
                    .frequency(b)
                    .cmp(&graph.frequency(a))
                    .then_with(|| graph.lemma(a).cmp(graph.lemma(b)))
            });
            let s = sentiment.get(&(c as u32));
            CommunitySummary {
                id: c as u32,
                size: members.len(),
                top_lemmas: members
                    .iter()
                    .take(10)
                    .map(|&id| graph.lemma(id).to_owned())
                    .collect(),
                mean_valence: s.map(|s| s.mean_valence),
                valence_label: s.map(|s| cfg.valence_bands.label(s.mean_valence).to_owned()),
                support: s.map_or(0, |s| s.support),
            }
        })
        .collect();

    let identity = identity_alignment(&documents, &inputs.identity_sets, &inputs.lexicon)
        .into_iter()
        .map(|row| IdentityRow {
            valence_label: row
                .mean_valence
                .map(|v| cfg.valence_bands.label(v).to_owned()),
            name: row.name,
            terms: row.terms,
            matching_docs: row.matching_docs,
            scored_docs: row.scored_docs,
            mean_valence: row.mean_valence,
        })
        .collect();

    let report = NetworkReport {
        schema_version: SCHEMA_VERSION,
        label: inputs.label.clone(),
        provenance: inputs.provenance.clone(),
        corpus: summary,
        config: Some(echo_config(inputs)),
        metric_modes: MetricModes::for_config(cfg),
        topology,
        top_degree,
        top_betweenness,
        bridging_concepts: bridges,
        communities,
        identity_alignment: identity,
    };
    Ok(Analysis {
        report,
        documents,
        graph,
        partition,
        degree,
        betweenness,
    })
}

fn echo_config(inputs: &ReportInputs) -> ConfigEcho {
    ConfigEcho {
        pipeline: inputs.upstream.clone().unwrap_or_else(|| {
            PipelineEcho::of(&inputs.pipeline, inputs.analysis.min_chars, &inputs.sources)
        }),
        graph: inputs.graph,
        analysis: inputs.analysis,
        sentiment_lexicon: ResourceEcho::of(
            &inputs.sources.sentiment_lexicon,
            inputs.lexicon.iter().map(|(k, v)| format!("{k}\t{v}")),
        ),
        identity_sets: inputs.identity_sets.clone(),
        identity_sets_source: inputs.sources.identity_sets.clone(),
    }
}
