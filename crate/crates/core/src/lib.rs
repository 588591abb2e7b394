//! Semantic co-occurrence networks from game-review corpora.
//!
//! The pipeline runs in stages, each with its own module:
//!
//! * [`corpus`]: fetch reviews from the store endpoint, filter short ones,
//!   persist them as JSONL with a manifest;
//! * [`text`]: segment, tokenize, lemmatize and stop-list review text into
//!   [`text::Document`]s;
//! * [`cooccur`]: count lemma pairs inside a sliding window of sentences and
//!   build a weighted [`graph::SemanticGraph`];
//! * [`metrics`]: density, path length, Louvain communities, degree and
//!   betweenness centrality, bridging concepts;
//! * [`sentiment`]: lexicon valence per document, per community and per
//!   identity term set;
//! * [`report`]: assemble a [`report::NetworkReport`], compare two of them,
//!   export GEXF, CSV and JSON;
//! * [`store`]: file formats for the intermediate document and graph stages.
//!
//! [`synthetic`] generates seeded corpora with a known topic structure.

pub mod cooccur;
pub mod corpus;
pub mod graph;
pub mod metrics;
pub mod report;
pub mod sentiment;
pub mod store;
pub mod synthetic;
pub mod text;

pub use cooccur::{build_graph, count_cooccurrences, CooccurrenceCounts, GraphBuildConfig};
pub use graph::{NodeId, SemanticGraph};
pub use text::{clean_document, Document, PipelineConfig};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub struct $name;
        };
    }
    chapter!(Introduction, "introduction.md");
    chapter!(Corpus, "corpus.md");
    chapter!(Cleaning, "cleaning.md");
    chapter!(Cooccurrence, "cooccurrence.md");
    chapter!(Metrics, "metrics.md");
    chapter!(Sentiment, "sentiment.md");
    chapter!(Reports, "reports.md");
    chapter!(Cli, "cli.md");
}
