//! Review text to cleaned [`Document`]s.
//!
//! The stages run in a fixed order: sentence segmentation, tokenization,
//! lemmatization, then stop-list filtering. Filtering after lemmatization
//! lets a single stop-list entry such as `crash` remove `crashes` and
//! `crashed` too.

mod lemma;

pub use lemma::{lemmatize, ConflationLexicon, LexiconError};
pub(crate) use lemma::is_lemma_word;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::RawReview;

pub const DEFAULT_MIN_TOKEN_LEN: usize = 3;

/// A cleaned review: sentences of lemmas, empty sentences removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub review_id: String,
    pub sentences: Vec<Vec<String>>,
}

impl Document {
    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// A set of words to exclude.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopList(BTreeSet<String>);

impl StopList {
    /// One entry per line, `#` starts a comment. Entries are lowercased.
    pub fn parse(text: &str) -> Self {
        text.lines()
            .map(lemma::strip_comment)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect()
    }

    pub fn standard() -> Self {
        Self::parse(include_str!("../../data/stoplist_standard.txt"))
    }

    /// The technical-noise list: software terms, not game-world terms.
    pub fn technical() -> Self {
        Self::parse(include_str!("../../data/stoplist_technical.txt"))
    }

    /// A longer technical list for stricter runs.
    pub fn technical_extended() -> Self {
        Self::parse(include_str!("../../data/stoplist_technical_ext.txt"))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for StopList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub standard_stoplist: StopList,
    pub technical_stoplist: StopList,
    pub conflation_lexicon: ConflationLexicon,
    pub min_token_len: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            standard_stoplist: StopList::standard(),
            technical_stoplist: StopList::technical(),
            conflation_lexicon: ConflationLexicon::shipped(),
            min_token_len: DEFAULT_MIN_TOKEN_LEN,
        }
    }
}

impl PipelineConfig {
    pub fn is_stopped(&self, word: &str) -> bool {
        self.standard_stoplist.contains(word) || self.technical_stoplist.contains(word)
    }
}

fn is_separator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '\n' | '\r')
}

/// Splits on `.`, `!`, `?` and line breaks. Empty pieces are dropped;
/// surrounding whitespace is kept.
pub fn segment_sentences(text: &str) -> Vec<&str> {
    text.split(is_separator).filter(|s| !s.is_empty()).collect()
}

/// Lowercased maximal alphabetic runs of at least `min_len` characters.
pub fn tokenize(sentence: &str, min_len: usize) -> Vec<String> {
    sentence
        .split(|c: char| !c.is_alphabetic())
        .filter(|run| !run.is_empty())
        .map(|run| {
            run.chars()
                .flat_map(char::to_lowercase)
                .filter(|c| c.is_alphabetic())
                .collect::<String>()
        })
        .filter(|tok| tok.chars().count() >= min_len)
        .collect()
}

/// Order-preserving removal of every lemma on either stop-list.
pub fn apply_stoplists(lemmas: Vec<String>, config: &PipelineConfig) -> Vec<String> {
    lemmas.into_iter().filter(|l| !config.is_stopped(l)).collect()
}

/// Runs one sentence through tokenize, lemmatize and stop-list filtering.
///
/// A token whose surface form is itself on a stop-list is dropped before
/// lemmatization, so function words like `during` never reach the suffix
/// rules.
pub fn clean_sentence(sentence: &str, config: &PipelineConfig) -> Vec<String> {
    let lemmas = tokenize(sentence, config.min_token_len)
        .into_iter()
        .filter(|tok| !config.is_stopped(tok))
        .map(|tok| lemmatize(&tok, &config.conflation_lexicon))
        .collect();
    apply_stoplists(lemmas, config)
}

pub fn clean_document(review: &RawReview, config: &PipelineConfig) -> Document {
    clean_text(&review.review_id, &review.text, config)
}

pub fn clean_text(review_id: &str, text: &str, config: &PipelineConfig) -> Document {
    let sentences = segment_sentences(text)
        .into_iter()
        .map(|s| clean_sentence(s, config))
        .filter(|s| !s.is_empty())
        .collect();
    Document {
        review_id: review_id.to_owned(),
        sentences,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn segmentation() {
        assert_eq!(
            segment_sentences("I cried. The winter is cruel!"),
            vec!["I cried", " The winter is cruel"]
        );
        assert!(segment_sentences("").is_empty());
        assert_eq!(segment_sentences("no terminator"), vec!["no terminator"]);
        assert_eq!(segment_sentences("a\n\n\nb?!c..."), vec!["a", "b", "c"]);
    }

    #[test]
    fn tokenization() {
        assert_eq!(tokenize("10/10 would tax again", 3), vec!["would", "tax", "again"]);
        assert_eq!(tokenize("Wolf-pack", 3), vec!["wolf", "pack"]);
        assert!(tokenize("CO2", 3).is_empty());
        assert_eq!(tokenize("CO2", 2), vec!["co"]);
        assert_eq!(tokenize("Élan über", 3), vec!["élan", "über"]);
    }

    #[test]
    fn stoplists() {
        let cfg = PipelineConfig::default();
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(apply_stoplists(v(&["lag", "wolf"]), &cfg), v(&["wolf"]));
        assert!(apply_stoplists(v(&["crash", "server"]), &cfg).is_empty());
        assert!(apply_stoplists(vec![], &cfg).is_empty());
    }

    #[test]
    fn clean_document_examples() {
        let cfg = PipelineConfig::default();
        let doc = clean_text("r", "Lag. Lag!", &cfg);
        assert!(doc.sentences.is_empty());

        let doc = clean_text("r", "The wolves were hunting. The server crashed.", &cfg);
        assert_eq!(doc.sentences, vec![vec!["wolf".to_string(), "hunt".to_string()]]);

        assert!(clean_text("r", "", &cfg).sentences.is_empty());
    }

    #[test]
    fn inflected_technical_terms_are_removed() {
        let cfg = PipelineConfig::default();
        let doc = clean_text("r", "Constant crashes and lagging servers. Wolves howl.", &cfg);
        assert_eq!(
            doc.sentences,
            vec![vec!["constant".to_string()], vec!["wolf".to_string(), "howl".to_string()]]
        );
    }

    #[test]
    fn shipped_lists_load() {
        assert_eq!(StopList::technical().len(), 5);
        assert!(StopList::standard().len() >= 150);
        assert!(StopList::technical_extended().contains("glitch"));
    }

    fn review_text() -> impl Strategy<Value = String> {
        let word = prop_oneof![
            Just("lag"), Just("crashes"), Just("Server"), Just("wolves"), Just("hunting"),
            Just("the"), Just("pollution"), Just("taxes"), Just("FPS"), Just("during"),
            Just("10/10"), Just("pack"), Just("cried"), Just("loving"), Just("über"),
        ];
        let sep = prop_oneof![Just(" "), Just(". "), Just("! "), Just("\n"), Just(", ")];
        prop::collection::vec((word, sep), 0..40)
            .prop_map(|parts| parts.into_iter().map(|(w, s)| format!("{w}{s}")).collect())
    }

    proptest! {
        #[test]
        fn document_invariants(text in review_text()) {
            let cfg = PipelineConfig::default();
            let doc = clean_text("r", &text, &cfg);
            prop_assert!(doc.sentences.len() <= segment_sentences(&text).len());
            for s in &doc.sentences {
                prop_assert!(!s.is_empty());
                for l in s {
                    prop_assert!(lemma::is_lemma_word(l));
                    prop_assert!(!cfg.is_stopped(l));
                }
            }
            prop_assert_eq!(clean_text("r", &text, &cfg), doc);
        }
    }
}
