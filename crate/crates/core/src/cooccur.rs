//! Sliding-window co-occurrence counting and graph construction.
//!
//! A window pools the lemmas of `w` consecutive sentences of one document
//! (stride 1, never crossing documents). Every unordered pair of distinct
//! lemmas in a window adds one to that pair's weight, however often either
//! lemma repeats inside the window. Node frequencies count token
//! occurrences over sentences, so overlapping windows do not inflate them.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, SemanticGraph};
use crate::text::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphBuildConfig {
    pub window_sentences: usize,
    pub min_node_freq: u64,
    pub min_edge_weight: u64,
}

impl Default for GraphBuildConfig {
    fn default() -> Self {
        Self {
            window_sentences: 3,
            min_node_freq: 5,
            min_edge_weight: 2,
        }
    }
}

impl GraphBuildConfig {
    pub fn validate(&self) -> Result<(), BuildError> {
        if self.window_sentences == 0 {
            return Err(BuildError::Config("window_sentences must be at least 1".into()));
        }
        if self.min_node_freq == 0 || self.min_edge_weight == 0 {
            return Err(BuildError::Config("thresholds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("invalid build config: {0}")]
    Config(String),
    #[error("counts are inconsistent: edge endpoint {0:?} has no frequency entry")]
    Integrity(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Raw corpus counts before pruning. Pair keys are ordered `(a, b)` with
/// `a < b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceCounts {
    pub frequencies: BTreeMap<String, u64>,
    pub pairs: BTreeMap<(String, String), u64>,
}

impl CooccurrenceCounts {
    pub fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.frequencies {
            *self.frequencies.entry(k).or_default() += v;
        }
        for (k, v) in other.pairs {
            *self.pairs.entry(k).or_default() += v;
        }
        self
    }

    /// Symmetric pair lookup.
    pub fn pair(&self, a: &str, b: &str) -> u64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.pairs
            .get(&(key.0.to_owned(), key.1.to_owned()))
            .copied()
            .unwrap_or(0)
    }
}

/// Pooled lemma lists for each window of `w` sentences.
///
/// `S >= w` sentences give `S - w + 1` windows; `0 < S < w` gives a single
/// window over all sentences; an empty document gives none.
pub fn windows(doc: &Document, w: usize) -> Vec<Vec<&str>> {
    assert!(w >= 1, "window size must be at least 1");
    let s = doc.sentences.len();
    if s == 0 {
        return Vec::new();
    }
    if s < w {
        return vec![pool(&doc.sentences)];
    }
    doc.sentences.windows(w).map(pool).collect()
}

fn count_document(doc: &Document, w: usize) -> CooccurrenceCounts {
    let mut counts = CooccurrenceCounts::default();
    for lemma in doc.lemmas() {
        *counts.frequencies.entry(lemma.to_owned()).or_default() += 1;
    }
    for window in windows(doc, w) {
        let distinct: Vec<&str> = window.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for (i, a) in distinct.iter().enumerate() {
            for b in &distinct[i + 1..] {
                *counts
                    .pairs
                    .entry(((*a).to_owned(), (*b).to_owned()))
                    .or_default() += 1;
            }
        }
    }
    counts
}

fn pool(range: &[Vec<String>]) -> Vec<&str> {
    range.iter().flatten().map(String::as_str).collect()
}

/// Counts per document in parallel and sums the results.
pub fn count_cooccurrences(docs: &[Document], w: usize) -> CooccurrenceCounts {
    assert!(w >= 1, "window size must be at least 1");
    docs.par_iter()
        .map(|d| count_document(d, w))
        .reduce(CooccurrenceCounts::default, CooccurrenceCounts::merge)
}

/// Prunes by node frequency and edge weight, drops isolated nodes, and
/// assigns ids in lemma order.
pub fn build_graph(
    counts: &CooccurrenceCounts,
    config: &GraphBuildConfig,
) -> Result<SemanticGraph, BuildError> {
    config.validate()?;
    for (a, b) in counts.pairs.keys() {
        for end in [a, b] {
            if !counts.frequencies.contains_key(end) {
                return Err(BuildError::Integrity(end.clone()));
            }
        }
    }
    let keep_node = |l: &str| counts.frequencies[l] >= config.min_node_freq;
    let edges: Vec<(&str, &str, u64)> = counts
        .pairs
        .iter()
        .filter(|&((a, b), &w)| w >= config.min_edge_weight && a != b && keep_node(a) && keep_node(b))
        .map(|((a, b), &w)| (a.as_str(), b.as_str(), w))
        .collect();
    let connected: BTreeSet<&str> = edges.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    let nodes = connected.into_iter().map(|l| (l, counts.frequencies[l]));
    Ok(SemanticGraph::from_parts(nodes, edges)?)
}
