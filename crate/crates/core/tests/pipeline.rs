mod support;

use std::collections::BTreeMap;

use proptest::prelude::*;
use quick_xml::events::Event;
use quick_xml::Reader;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semnet::corpus::{
    filter_substantive, load_corpus, persist_corpus, CollectionWindow, CorpusError,
    CorpusManifest, RawReview,
};
use semnet::graph::SemanticGraph;
use semnet::metrics::{density, CommunityPartition};
use semnet::report::{build_report, export_csv_tables, read_edges_csv, write_gexf, ReportInputs};
use semnet::sentiment::{community_sentiment, identity_alignment, score_document, IdentityTermSet, SentimentLexicon};
use semnet::synthetic::{planted_corpus, PlantedConfig};
use semnet::text::Document;
use support::adjusted_rand_index;

#[test]
fn planted_topics_are_recovered() {
    for seed in 0..3 {
        let corpus = planted_corpus(seed, &PlantedConfig::default());
        let inputs = ReportInputs {
            analysis: semnet::report::AnalysisConfig {
                seed,
                ..Default::default()
            },
            ..Default::default()
        };
        let a = build_report(&corpus.reviews, None, &inputs).unwrap();
        let planted: Vec<usize> = a.graph.node_ids().map(|v| corpus.topic_of[a.graph.lemma(v)]).collect();
        let found: Vec<usize> = a.partition.assignment.iter().map(|&c| c as usize).collect();
        assert!(adjusted_rand_index(&planted, &found) >= 0.9, "seed {seed}");
        assert!(a.partition.modularity >= 0.3);
    }
}

#[test]
fn ari_reference_values() {
    assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
    // classic example: 0.24242424...
    let a = [0, 0, 0, 1, 1, 1];
    let b = [0, 0, 1, 1, 2, 2];
    assert!((adjusted_rand_index(&a, &b) - 0.242424242424).abs() < 1e-9);
}

fn strict_analysis() -> semnet::report::Analysis {
    let corpus = planted_corpus(0, &PlantedConfig::default());
    let mut inputs = ReportInputs::default();
    inputs.graph.min_edge_weight = 16;
    build_report(&corpus.reviews, None, &inputs).unwrap()
}

#[test]
fn gexf_is_well_formed_and_complete() {
    let a = strict_analysis();
    let xml = write_gexf(a.view(), &a.report.provenance);
    let mut reader = Reader::from_str(&xml);
    let mut nodes: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut current: Option<String> = None;
    let mut root_version = None;
    loop {
        match reader.read_event().expect("well-formed xml") {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) => {
                let attrs: BTreeMap<String, String> = e
                    .attributes()
                    .map(|a| {
                        let a = a.unwrap();
                        (
                            String::from_utf8(a.key.as_ref().to_vec()).unwrap(),
                            a.unescape_value().unwrap().into_owned(),
                        )
                    })
                    .collect();
                match e.name().as_ref() {
                    b"gexf" => root_version = attrs.get("version").cloned(),
                    b"node" => {
                        let label = attrs["label"].clone();
                        nodes.insert(label.clone(), BTreeMap::new());
                        current = Some(label);
                    }
                    b"attvalue" => {
                        let node = current.as_ref().expect("attvalue inside node");
                        nodes.get_mut(node).unwrap().insert(attrs["for"].clone(), attrs["value"].clone());
                    }
                    b"edge" => edges.push(attrs),
                    _ => {}
                }
            }
            _ => {}
        }
    }
    assert_eq!(root_version.as_deref(), Some("1.3"));
    let g = &a.graph;
    assert_eq!(nodes.len(), g.node_count());
    assert_eq!(edges.len(), g.edge_count());
    for v in g.node_ids() {
        let attrs = &nodes[g.lemma(v)];
        assert_eq!(attrs["0"], g.frequency(v).to_string());
        assert_eq!(attrs["1"], a.partition.community_of(v).to_string());
        assert_eq!(attrs["2"], g.degree(v).to_string());
        let b: f64 = attrs["3"].parse().unwrap();
        assert_eq!(b, a.betweenness.score(v));
    }
    let total: u64 = edges.iter().map(|e| e["weight"].parse::<u64>().unwrap()).sum();
    assert_eq!(total, g.total_weight());
}

#[test]
fn gexf_for_edgeless_graph_has_no_edges() {
    let g = SemanticGraph::from_parts(Vec::<(&str, u64)>::new(), Vec::<(&str, &str, u64)>::new()).unwrap();
    let p = CommunityPartition::single(&g);
    let d = semnet::metrics::degree_centrality(&g);
    let b = semnet::metrics::betweenness_centrality(&g);
    let xml = write_gexf(
        semnet::report::GraphView { graph: &g, partition: &p, degree: &d, betweenness: &b },
        &semnet::corpus::Provenance::current(),
    );
    assert!(!xml.contains("<edge "));
    assert!(!xml.contains("<node "));
}

#[test]
fn csv_round_trip_preserves_density() {
    let a = strict_analysis();
    let dir = tempfile::tempdir().unwrap();
    let (nodes, edges) = export_csv_tables(a.view(), dir.path()).unwrap();
    let back = read_edges_csv(&edges).unwrap();
    assert_eq!(density(&back).unwrap(), density(&a.graph).unwrap());
    assert_eq!(back.edge_count(), a.graph.edge_count());
    let nodes_csv = std::fs::read_to_string(nodes).unwrap();
    let mut lines = nodes_csv.lines();
    assert_eq!(lines.next(), Some("lemma,id,frequency,community,degree,betweenness"));
    assert_eq!(lines.count(), a.graph.node_count());
}

fn doc(id: &str, words: &[&str]) -> Document {
    Document {
        review_id: id.into(),
        sentences: vec![words.iter().map(|w| w.to_string()).collect()],
    }
}

#[test]
fn community_sentiment_hand_trace() {
    let g = SemanticGraph::from_edges(&[("pack", "wolf", 2), ("law", "tax", 2), ("tax", "wolf", 1)]).unwrap();
    // ids in lemma order: law 0, pack 1, tax 2, wolf 3
    let p = CommunityPartition {
        assignment: vec![1, 0, 1, 0],
        modularity: 0.0,
    };
    let lex = SentimentLexicon::new([("love", 0.8), ("hate", -0.6), ("good", 0.4)]).unwrap();
    let docs = [
        doc("d1", &["wolf", "pack", "love"]),
        doc("d2", &["tax", "hate", "wolf"]),
        doc("d3", &["law", "law", "tax", "good", "hate", "zebra"]),
        doc("d4", &["wolf", "pack"]),
    ];
    let s = community_sentiment(&docs, &g, &p, &lex);
    // c0: (1.0 * 0.8 + 0.5 * -0.6) / 1.5; c1: (0.5 * -0.6 + 1.0 * -0.1) / 1.5
    assert!((s[&0].mean_valence - 0.5 / 1.5).abs() < 1e-12);
    assert!((s[&1].mean_valence - -0.4 / 1.5).abs() < 1e-12);
    assert_eq!((s[&0].support, s[&1].support), (2, 2));
}

const WORDS: [&str; 10] = ["wolf", "pack", "tax", "law", "love", "hate", "good", "pup", "grind", "job"];

fn random_docs(seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..12)
        .map(|i| {
            let n = (i % 5) + 1;
            let words: Vec<&str> = (0..n).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            doc(&format!("d{i}"), &words)
        })
        .collect()
}

proptest! {
    #[test]
    fn sentiment_properties(seed in 0u64..50_000) {
        let g = SemanticGraph::from_edges(&[("pack", "wolf", 2), ("law", "tax", 2), ("tax", "wolf", 1), ("pup", "wolf", 1)]).unwrap();
        let p = CommunityPartition { assignment: vec![1, 0, 0, 1, 0], modularity: 0.0 };
        let lex = SentimentLexicon::new([("love", 0.8), ("hate", -0.6), ("good", 0.4)]).unwrap();
        let docs = random_docs(seed);
        let s = community_sentiment(&docs, &g, &p, &lex);
        let scored = docs.iter().filter(|d| score_document(d, &lex).is_some()).count();
        for c in s.values() {
            prop_assert!((-1.0..=1.0).contains(&c.mean_valence));
            prop_assert!(c.support >= 1 && c.support <= scored);
        }
        let mut shuffled = docs.clone();
        shuffled.reverse();
        let t = community_sentiment(&shuffled, &g, &p, &lex);
        prop_assert_eq!(s.keys().collect::<Vec<_>>(), t.keys().collect::<Vec<_>>());
        for (k, v) in &s {
            prop_assert!((v.mean_valence - t[k].mean_valence).abs() < 1e-12);
        }

        let sets = IdentityTermSet::parse_all("Wolf: wolf, pup\nLaborer: grind, job\nNobody: zebra").unwrap();
        for row in identity_alignment(&docs, &sets, &lex) {
            let set = sets.iter().find(|s| s.name == row.name).unwrap();
            let matching: Vec<&Document> = docs
                .iter()
                .filter(|d| d.lemmas().any(|l| set.terms.contains(l)))
                .collect();
            prop_assert_eq!(row.matching_docs, matching.len());
            let scores: Vec<f64> = matching.iter().filter_map(|d| score_document(d, &lex)).collect();
            prop_assert_eq!(row.scored_docs, scores.len());
            match row.mean_valence {
                None => prop_assert!(scores.is_empty()),
                Some(m) => prop_assert!((m - scores.iter().sum::<f64>() / scores.len() as f64).abs() < 1e-12),
            }
        }
    }

    #[test]
    fn corpus_round_trip(texts in prop::collection::vec("[a-zA-Z .!?\u{e9}\u{1F43A}]{0,80}", 0..20)) {
        let reviews: Vec<RawReview> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| RawReview {
                review_id: format!("r{i}"),
                app_id: 5,
                text: t.clone(),
                created_at: i as i64,
                language: "en".into(),
                votes_up: 0,
            })
            .filter(|r| filter_substantive(r, 50))
            .collect();
        let manifest = CorpusManifest {
            app_id: 5,
            collection_window: CollectionWindow::unbounded(),
            filter_min_chars: 50,
            review_count_raw: texts.len(),
            review_count_validated: reviews.len(),
            provenance: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        persist_corpus(&reviews, &manifest, &path).unwrap();
        let (m, back) = load_corpus(&path).unwrap();
        prop_assert_eq!(m, manifest);
        prop_assert_eq!(&back, &reviews);
        for r in &back {
            prop_assert!(r.text.chars().count() > 50);
        }
    }
}

#[test]
fn truncated_corpus_is_detected() {
    let corpus = planted_corpus(4, &PlantedConfig { reviews: 10, ..Default::default() });
    let manifest = CorpusManifest {
        app_id: 1,
        collection_window: CollectionWindow::unbounded(),
        filter_min_chars: 50,
        review_count_raw: 10,
        review_count_validated: 10,
        provenance: None,
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    persist_corpus(&corpus.reviews, &manifest, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let kept: Vec<&str> = text.lines().take(9).collect();
    std::fs::write(&path, kept.join("\n") + "\n").unwrap();
    assert!(matches!(load_corpus(&path), Err(CorpusError::Corrupt { .. })));
}
