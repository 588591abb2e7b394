//! Lexicon valence scoring over cleaned documents.
//!
//! A document's score is the mean valence of its lemma occurrences that the
//! lexicon knows; documents without a single hit have no score. Scores are
//! then aggregated per community of the semantic graph and per identity term
//! set. There is no negation handling.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::SemanticGraph;
use crate::metrics::CommunityPartition;
use crate::text::Document;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SentimentError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("valence {value} for {lemma:?} is outside [-1, 1]")]
    OutOfRange { lemma: String, value: f64 },
    #[error("identity set {0:?} has no terms")]
    EmptySet(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, f64>,
}

impl SentimentLexicon {
    pub fn new<S: Into<String>>(
        entries: impl IntoIterator<Item = (S, f64)>,
    ) -> Result<Self, SentimentError> {
        let mut map = BTreeMap::new();
        for (lemma, value) in entries {
            let lemma = lemma.into();
            if !(-1.0..=1.0).contains(&value) {
                return Err(SentimentError::OutOfRange { lemma, value });
            }
            if !crate::text::is_lemma_word(&lemma) {
                return Err(SentimentError::Syntax {
                    line: 0,
                    reason: format!("{lemma:?} is not a lowercase alphabetic lemma"),
                });
            }
            map.insert(lemma, value);
        }
        Ok(Self { entries: map })
    }

    /// `lemma<TAB>valence` lines; `#` comments and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self, SentimentError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |reason: String| SentimentError::Syntax {
                line: idx + 1,
                reason,
            };
            let (lemma, value) = line
                .split_once('\t')
                .ok_or_else(|| err("expected lemma<TAB>valence".into()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("bad valence {value:?}")))?;
            let lemma = lemma.trim();
            if !crate::text::is_lemma_word(lemma) {
                return Err(err(format!("{lemma:?} is not a lowercase alphabetic lemma")));
            }
            entries.push((lemma.to_owned(), value));
        }
        Self::new(entries)
    }

    pub fn shipped() -> Self {
        Self::parse(include_str!("../data/sentiment.tsv")).expect("bundled lexicon is valid")
    }

    pub fn get(&self, lemma: &str) -> Option<f64> {
        self.entries.get(lemma).copied()
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTermSet {
    pub name: String,
    pub terms: BTreeSet<String>,
}

impl IdentityTermSet {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        terms: impl IntoIterator<Item = S>,
    ) -> Result<Self, SentimentError> {
        let name = name.into();
        let terms: BTreeSet<String> = terms.into_iter().map(Into::into).collect();
        if terms.is_empty() {
            return Err(SentimentError::EmptySet(name));
        }
        Ok(Self { name, terms })
    }

    /// `name: term, term, ...` per line.
    pub fn parse_all(text: &str) -> Result<Vec<Self>, SentimentError> {
        let mut sets = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, terms) = line.split_once(':').ok_or_else(|| SentimentError::Syntax {
                line: idx + 1,
                reason: "expected `name: term, term, ...`".into(),
            })?;
            let terms: Vec<String> = terms
                .split(',')
                .map(|t| t.trim().to_lowercase())
                .filter(|t| !t.is_empty())
                .collect();
            sets.push(Self::new(name.trim(), terms)?);
        }
        Ok(sets)
    }

    pub fn shipped() -> Vec<Self> {
        Self::parse_all(include_str!("../data/identity_sets.txt")).expect("bundled sets are valid")
    }

    pub fn matches(&self, doc: &Document) -> bool {
        doc.lemmas().any(|l| self.terms.contains(l))
    }
}

pub fn score_document(doc: &Document, lex: &SentimentLexicon) -> Option<f64> {
    let (sum, n) = doc
        .lemmas()
        .filter_map(|l| lex.get(l))
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunitySentiment {
    pub mean_valence: f64,
    /// Documents that contributed.
    pub support: usize,
}

/// Spreads each scored document over the communities of its graph lemmas.
///
/// Only lemmas that are graph nodes and are *not* in the lexicon decide the
/// spread, so sentiment words do not pull a score toward their own cluster.
/// A document with a fraction `f` of those occurrences in community `c`
/// contributes its score to `c` with weight `f`.
pub fn community_sentiment(
    docs: &[Document],
    g: &SemanticGraph,
    partition: &CommunityPartition,
    lex: &SentimentLexicon,
) -> BTreeMap<u32, CommunitySentiment> {
    let c = partition.community_count();
    let mut weighted = vec![0.0; c];
    let mut weight = vec![0.0; c];
    let mut support = vec![0usize; c];
    let mut hits = vec![0usize; c];
    for doc in docs {
        let Some(score) = score_document(doc, lex) else {
            continue;
        };
        hits.fill(0);
        let mut total = 0usize;
        for lemma in doc.lemmas().filter(|l| !lex.contains(l)) {
            if let Some(id) = g.id_of(lemma) {
                hits[partition.community_of(id) as usize] += 1;
                total += 1;
            }
        }
        if total == 0 {
            continue;
        }
        for k in 0..c {
            if hits[k] > 0 {
                let f = hits[k] as f64 / total as f64;
                weighted[k] += f * score;
                weight[k] += f;
                support[k] += 1;
            }
        }
    }
    (0..c)
        .filter(|&k| support[k] > 0)
        .map(|k| {
            (
                k as u32,
                CommunitySentiment {
                    mean_valence: weighted[k] / weight[k],
                    support: support[k],
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityAlignment {
    pub name: String,
    pub terms: Vec<String>,
    /// Documents containing at least one term.
    pub matching_docs: usize,
    /// Matching documents that also have a score.
    pub scored_docs: usize,
    pub mean_valence: Option<f64>,
}

pub fn identity_alignment(
    docs: &[Document],
    sets: &[IdentityTermSet],
    lex: &SentimentLexicon,
) -> Vec<IdentityAlignment> {
    sets.iter()
        .map(|set| {
            let mut matching = 0;
            let mut scored = 0;
            let mut sum = 0.0;
            for doc in docs.iter().filter(|d| set.matches(d)) {
                matching += 1;
                if let Some(s) = score_document(doc, lex) {
                    scored += 1;
                    sum += s;
                }
            }
            IdentityAlignment {
                name: set.name.clone(),
                terms: set.terms.iter().cloned().collect(),
                matching_docs: matching,
                scored_docs: scored,
                mean_valence: (scored > 0).then(|| sum / scored as f64),
            }
        })
        .collect()
}

/// Cut points turning a mean valence into a coarse label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValenceBands {
    pub highly_negative_below: f64,
    pub negative_below: f64,
    pub positive_above: f64,
    pub highly_positive_above: f64,
}

impl Default for ValenceBands {
    fn default() -> Self {
        Self {
            highly_negative_below: -0.5,
            negative_below: -0.05,
            positive_above: 0.05,
            highly_positive_above: 0.5,
        }
    }
}

impl ValenceBands {
    pub fn label(&self, v: f64) -> &'static str {
        if v < self.highly_negative_below {
            "highly negative"
        } else if v < self.negative_below {
            "negative"
        } else if v > self.highly_positive_above {
            "highly positive"
        } else if v > self.positive_above {
            "positive"
        } else {
            "neutral"
        }
    }
}
