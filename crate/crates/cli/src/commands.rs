use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, NaiveTime};
use semnet::cooccur::{build_graph, count_cooccurrences, GraphBuildConfig};
use semnet::corpus::{
    fetch_reviews, filter_substantive, load_corpus, persist_corpus, CollectionWindow,
    CorpusManifest, FetchConfig, HttpTransport, Provenance, RateLimiter,
};
use semnet::metrics::EdgeWeighting;
use semnet::report::{
    analyze_documents, build_report, clean_corpus, compare, export_csv_tables, export_gexf,
    export_json, render_comparison, Analysis, AnalysisConfig, CorpusSummary, NetworkReport,
    PipelineEcho, ReportInputs, ResourceSources, SCHEMA_VERSION,
};
use semnet::sentiment::{IdentityTermSet, SentimentLexicon};
use semnet::store::{read_json, write_json, DocumentStore, GraphFile};
use semnet::text::{ConflationLexicon, PipelineConfig, StopList};

use crate::args::*;
use crate::error::CliError;

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Fetch(a) => fetch(a),
        Command::Clean(a) => clean(a),
        Command::Graph(a) => graph(a),
        Command::Analyze(a) => analyze(a),
        Command::Compare(a) => compare_reports(a),
        Command::Export(a) => export(a),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into())
}

fn provenance(command: &str) -> Provenance {
    Provenance::current().with("command", command)
}

fn parse_day(s: &str, end_of_day: bool) -> Result<i64, CliError> {
    let date = NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| CliError::Usage(format!("invalid date {s:?} (expected YYYY-MM-DD): {e}")))?;
    let time = if end_of_day {
        NaiveTime::from_hms_opt(23, 59, 59)
    } else {
        NaiveTime::from_hms_opt(0, 0, 0)
    }
    .expect("valid time of day");
    Ok(date.and_time(time).and_utc().timestamp())
}

fn fetch(a: FetchArgs) -> Result<(), CliError> {
    let start = a.from.as_deref().map(|s| parse_day(s, false)).transpose()?;
    let end = a.to.as_deref().map(|s| parse_day(s, true)).transpose()?;
    let window = CollectionWindow::new(start.unwrap_or(i64::MIN), end.unwrap_or(i64::MAX));
    if window.start > window.end {
        return Err(CliError::Usage("--from is after --to".into()));
    }
    let mut config = FetchConfig {
        endpoint: a.endpoint.clone(),
        window,
        language: a.language.clone(),
        page_limit: a.page_limit,
        max_retries: a.max_retries,
        rate_limiter: RateLimiter::from_env().map_err(CliError::Usage)?,
        ..FetchConfig::default()
    };
    let mut transport = HttpTransport::new().map_err(|e| CliError::Io(e.to_string()))?;
    let reviews = fetch_reviews(&mut transport, a.app_id, &mut config)?;
    let raw = reviews.len();
    let kept: Vec<_> = reviews
        .into_iter()
        .filter(|r| filter_substantive(r, a.min_chars))
        .collect();
    let manifest = CorpusManifest {
        app_id: a.app_id,
        collection_window: window,
        filter_min_chars: a.min_chars,
        review_count_raw: raw,
        review_count_validated: kept.len(),
        provenance: Some(
            provenance("fetch")
                .with("language", &a.language)
                .with("page_limit", a.page_limit)
                .with("endpoint", &a.endpoint),
        ),
    };
    persist_corpus(&kept, &manifest, &a.out)?;
    eprintln!("fetched {raw} reviews, kept {} substantive", kept.len());
    Ok(())
}

fn pipeline_config(p: &PipelineArgs) -> Result<(PipelineConfig, ResourceSources), CliError> {
    let mut cfg = PipelineConfig {
        min_token_len: p.min_token_len,
        ..PipelineConfig::default()
    };
    let mut sources = ResourceSources::default();
    if let Some(path) = &p.stoplist {
        cfg.standard_stoplist = StopList::parse(&read_text(path)?);
        sources.standard_stoplist = path.display().to_string();
    }
    if let Some(path) = &p.technical_stoplist {
        cfg.technical_stoplist = StopList::parse(&read_text(path)?);
        sources.technical_stoplist = path.display().to_string();
    }
    if let Some(path) = &p.conflation {
        cfg.conflation_lexicon = ConflationLexicon::parse(&read_text(path)?)?;
        sources.conflation_lexicon = path.display().to_string();
    }
    Ok((cfg, sources))
}

fn build_config(b: &BuildArgs) -> Result<GraphBuildConfig, CliError> {
    let cfg = GraphBuildConfig {
        window_sentences: b.window,
        min_node_freq: b.min_node_freq,
        min_edge_weight: b.min_edge_weight,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Loads a corpus and cleans it into a document store.
fn documents_from_corpus(
    path: &Path,
    pipeline: &PipelineArgs,
    command: &str,
) -> Result<DocumentStore, CliError> {
    let (manifest, reviews) = load_corpus(path)?;
    let (cfg, sources) = pipeline_config(pipeline)?;
    let documents = clean_corpus(&reviews, &cfg, pipeline.min_chars);
    Ok(DocumentStore {
        schema_version: SCHEMA_VERSION,
        provenance: provenance(command).with("input", file_name(path)),
        corpus: CorpusSummary::new(Some(&manifest), reviews.len(), &documents),
        pipeline: PipelineEcho::of(&cfg, pipeline.min_chars, &sources),
        documents,
    })
}

fn clean(a: CleanArgs) -> Result<(), CliError> {
    let Some(corpus) = &a.corpus else {
        return Err(CliError::missing_stage(
            "corpus",
            "pass --corpus with a file written by `semnet fetch`",
        ));
    };
    let store = documents_from_corpus(corpus, &a.pipeline, "clean")?;
    if store.corpus.documents_non_empty == 0 {
        log::warn!("no document has content left after cleaning");
    }
    write_json(&store, &a.out)?;
    eprintln!(
        "{} documents ({} non-empty) -> {}",
        store.documents.len(),
        store.corpus.documents_non_empty,
        a.out.display()
    );
    Ok(())
}

fn graph(a: GraphArgs) -> Result<(), CliError> {
    let store = match (&a.documents, &a.corpus) {
        (Some(d), _) => read_json::<DocumentStore>(d)?,
        (None, Some(c)) => documents_from_corpus(c, &a.pipeline, "graph")?,
        (None, None) => {
            return Err(CliError::missing_stage(
                "documents",
                "pass --documents (from `semnet clean`) or --corpus (from `semnet fetch`)",
            ))
        }
    };
    let build = build_config(&a.build)?;
    let counts = count_cooccurrences(&store.documents, build.window_sentences);
    let g = build_graph(&counts, &build).map_err(|e| CliError::Data(e.to_string()))?;
    if g.is_empty() {
        log::warn!("graph is empty after pruning; consider lower thresholds");
    }
    let input = a.documents.as_ref().or(a.corpus.as_ref()).expect("one input is set");
    let file = GraphFile {
        schema_version: SCHEMA_VERSION,
        provenance: provenance("graph").with("input", file_name(input)),
        corpus: store.corpus,
        pipeline: store.pipeline,
        build,
        graph: g,
    };
    write_json(&file, &a.out)?;
    eprintln!(
        "{} nodes, {} edges -> {}",
        file.graph.node_count(),
        file.graph.edge_count(),
        a.out.display()
    );
    Ok(())
}

fn analysis_inputs(
    command: &str,
    input: &Path,
    pipeline: &PipelineArgs,
    build: &BuildArgs,
    a: &AnalysisArgs,
) -> Result<ReportInputs, CliError> {
    let (cfg, mut sources) = pipeline_config(pipeline)?;
    let lexicon = match &a.lexicon {
        Some(path) => {
            sources.sentiment_lexicon = path.display().to_string();
            SentimentLexicon::parse(&read_text(path)?)?
        }
        None => SentimentLexicon::shipped(),
    };
    let identity_sets = match &a.identity_sets {
        Some(path) => {
            sources.identity_sets = path.display().to_string();
            IdentityTermSet::parse_all(&read_text(path)?)?
        }
        None => IdentityTermSet::shipped(),
    };
    if !(a.resolution.is_finite() && a.resolution > 0.0) {
        return Err(CliError::Usage("--resolution must be a positive number".into()));
    }
    Ok(ReportInputs {
        label: a.label.clone().unwrap_or_else(|| stem(input)),
        pipeline: cfg,
        graph: build_config(build)?,
        analysis: AnalysisConfig {
            min_chars: pipeline.min_chars,
            resolution: a.resolution,
            seed: a.seed,
            modularity_weighting: match a.modularity {
                Weighting::Weighted => EdgeWeighting::Weighted,
                Weighting::Unweighted => EdgeWeighting::Unweighted,
            },
            top_k: a.top_k,
            normalize_betweenness: a.normalize_betweenness,
            ..AnalysisConfig::default()
        },
        lexicon,
        identity_sets,
        sources,
        upstream: None,
        provenance: provenance(command)
            .with("input", file_name(input))
            .with("seed", a.seed),
    })
}

fn run_analysis(
    command: &str,
    input: &InputArgs,
    pipeline: &PipelineArgs,
    build: &BuildArgs,
    a: &AnalysisArgs,
) -> Result<Analysis, CliError> {
    match (&input.corpus, &input.documents, &input.graph) {
        (_, Some(docs), graph_path) => {
            if input.corpus.is_some() {
                log::warn!("--documents given; ignoring --corpus");
            }
            let store: DocumentStore = read_json(docs)?;
            let mut inputs = analysis_inputs(command, docs, pipeline, build, a)?;
            inputs.analysis.min_chars = store.pipeline.min_chars;
            inputs.upstream = Some(store.pipeline.clone());
            let graph = match graph_path {
                Some(path) => {
                    let file: GraphFile = read_json(path)?;
                    if file.pipeline != store.pipeline || file.corpus != store.corpus {
                        return Err(CliError::Data(format!(
                            "{} was not built from {}",
                            path.display(),
                            docs.display()
                        )));
                    }
                    inputs.graph = file.build;
                    inputs.provenance = inputs.provenance.with("graph", file_name(path));
                    Some(file.graph)
                }
                None => None,
            };
            Ok(analyze_documents(store.documents, graph, store.corpus, &inputs)?)
        }
        (_, None, Some(_)) => Err(CliError::missing_stage(
            "documents",
            "--graph needs --documents (from `semnet clean`) for the sentiment overlay",
        )),
        (Some(corpus), None, None) => {
            let (manifest, reviews) = load_corpus(corpus)?;
            let inputs = analysis_inputs(command, corpus, pipeline, build, a)?;
            Ok(build_report(&reviews, Some(&manifest), &inputs)?)
        }
        (None, None, None) => Err(CliError::missing_stage(
            "input",
            "pass --corpus (from `semnet fetch`) or --documents (from `semnet clean`)",
        )),
    }
}

fn summary_line(r: &NetworkReport) -> String {
    let t = &r.topology;
    let fmt = |v: Option<f64>, p: usize| v.map_or("undefined".into(), |x| format!("{x:.p$}"));
    format!(
        "{}: {} nodes, {} edges, density {}, path length {}, modularity {}, {} communities",
        r.label,
        t.nodes,
        t.edges,
        fmt(t.density.value(), 3),
        fmt(t.average_path_length.value(), 2),
        fmt(t.modularity.value(), 2),
        t.communities
    )
}

fn analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let analysis = run_analysis("analyze", &a.input, &a.pipeline, &a.build, &a.analysis)?;
    match &a.out {
        Some(path) => {
            export_json(&analysis.report, path)?;
            eprintln!("{}", summary_line(&analysis.report));
        }
        None => {
            std::io::stdout()
                .write_all(analysis.report.to_json().as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn compare_reports(a: CompareArgs) -> Result<(), CliError> {
    let ra: NetworkReport = read_json(&a.a)?;
    let rb: NetworkReport = read_json(&a.b)?;
    let mut c = compare(&ra, &rb);
    c.provenance = provenance("compare")
        .with("a", file_name(&a.a))
        .with("b", file_name(&a.b));
    print!("{}", render_comparison(&c));
    if let Some(path) = &a.out {
        write_json(&c, path)?;
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<(), CliError> {
    let analysis = run_analysis("export", &a.input, &a.pipeline, &a.build, &a.analysis)?;
    fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", a.out.display())))?;
    let want = |f: Format| a.format == f || a.format == Format::All;
    let mut written: Vec<PathBuf> = Vec::new();
    if want(Format::Gexf) {
        let path = a.out.join("graph.gexf");
        export_gexf(analysis.view(), &analysis.report.provenance, &path)?;
        written.push(path);
    }
    if want(Format::Csv) {
        let (nodes, edges) = export_csv_tables(analysis.view(), &a.out)?;
        written.extend([nodes, edges]);
    }
    if want(Format::Json) || want(Format::Csv) {
        // CSV tables have no room for provenance; the report carries it
        let path = a.out.join("report.json");
        export_json(&analysis.report, &path)?;
        written.push(path);
    }
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
