//! Seeded synthetic review corpora with a known two-topic structure.
//!
//! Each review is written from one of two disjoint 20-word vocabularies; every
//! word is swapped for a word of the other vocabulary with a configurable
//! probability. The words are base forms that pass the default cleaning
//! pipeline unchanged, so the planted topic of every graph node is known.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawReview;

/// Governance and labor vocabulary.
pub const TOPIC_SYSTEMS: [&str; 20] = [
    "tax", "law", "vote", "govern", "market", "trade", "money", "smelt", "mine", "grind",
    "job", "craft", "skill", "profit", "council", "policy", "unfair", "frustrate", "factory",
    "contract",
];

/// Survival and family vocabulary.
pub const TOPIC_SURVIVAL: [&str; 20] = [
    "wolf", "pup", "pack", "elk", "hunt", "den", "river", "winter", "forest", "howl",
    "mate", "prey", "bison", "safe", "love", "territory", "meadow", "scent", "coyote",
    "snow",
];

#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub reviews: usize,
    /// Probability that a word is drawn from the other topic.
    pub noise: f64,
    pub sentences: (usize, usize),
    pub words_per_sentence: (usize, usize),
    pub app_id: u32,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            reviews: 200,
            noise: 0.05,
            sentences: (3, 6),
            words_per_sentence: (4, 7),
            app_id: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub reviews: Vec<RawReview>,
    /// Planted topic (0 or 1) of every vocabulary word.
    pub topic_of: BTreeMap<String, usize>,
}

pub fn planted_corpus(seed: u64, config: &PlantedConfig) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topics = [&TOPIC_SYSTEMS, &TOPIC_SURVIVAL];
    let mut reviews = Vec::with_capacity(config.reviews);
    for i in 0..config.reviews {
        let topic = i % 2;
        let n_sent = rng.gen_range(config.sentences.0..=config.sentences.1);
        let mut text = String::new();
        let mut written = 0;
        // keep every review above the default substantive-content threshold
        while written < n_sent || text.chars().count() <= crate::corpus::DEFAULT_MIN_CHARS {
            written += 1;
            let n_words = rng.gen_range(config.words_per_sentence.0..=config.words_per_sentence.1);
            let words: Vec<&str> = (0..n_words)
                .map(|_| {
                    let t = if rng.gen_bool(config.noise) { 1 - topic } else { topic };
                    *topics[t].choose(&mut rng).expect("vocabulary is non-empty")
                })
                .collect();
            if !text.is_empty() {
                text.push(' ');
            }
            let sentence = words.join(" ");
            let mut chars = sentence.chars();
            if let Some(first) = chars.next() {
                text.extend(first.to_uppercase());
                text.push_str(chars.as_str());
            }
            text.push('.');
        }
        reviews.push(RawReview {
            review_id: format!("planted-{seed}-{i:04}"),
            app_id: config.app_id,
            text,
            created_at: 1_600_000_000 + i as i64 * 3_600,
            language: "en".into(),
            votes_up: (i % 7) as u64,
        });
    }
    let topic_of = topics
        .iter()
        .enumerate()
        .flat_map(|(t, words)| words.iter().map(move |w| (w.to_string(), t)))
        .collect();
    PlantedCorpus { reviews, topic_of }
}
