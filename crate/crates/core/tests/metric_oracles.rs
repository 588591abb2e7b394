mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semnet::graph::SemanticGraph;
use semnet::metrics::{
    average_path_length, betweenness_centrality, degree_centrality, density, louvain,
    modularity_of,
};
use support::*;

#[test]
fn brandes_and_path_length_match_oracles_on_random_graphs() {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 200 {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=30);
        let Some(g) = random_graph(&mut rng, n, 0.2) else { continue };
        let fast = betweenness_centrality(&g);
        let slow = naive_betweenness(&g);
        for v in g.node_ids() {
            let (a, b) = (fast.score(v), slow[v as usize]);
            assert!((a - b).abs() < 1e-9, "seed {seed} node {v}: {a} vs {b}");
        }
        let apl = average_path_length(&g).ok();
        let fw = floyd_warshall_apl(&g);
        match (apl, fw) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}"),
            (a, b) => assert_eq!(a, b, "seed {seed}"),
        }
        checked += 1;
    }
}

#[test]
fn two_triangle_modularity_and_brute_force_optimum() {
    let g = two_triangles();
    let q = modularity_of(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
    assert!((q - 0.357142857).abs() < 1e-9, "{q}");
    let best = all_partitions(6)
        .iter()
        .map(|p| modularity_by_definition(&g, p))
        .fold(f64::NEG_INFINITY, f64::max);
    let found = louvain(&g, 1.0, 0);
    assert!((found.modularity - best).abs() < 1e-9);
    assert_eq!(found.assignment, vec![0, 0, 0, 1, 1, 1]);
}

#[test]
fn louvain_never_beats_the_brute_force_optimum() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(3..=7);
        let Some(g) = random_graph(&mut rng, n, 0.5) else { continue };
        let best = all_partitions(g.node_count())
            .iter()
            .map(|p| modularity_by_definition(&g, p))
            .fold(f64::NEG_INFINITY, f64::max);
        let found = louvain(&g, 1.0, seed);
        assert!(found.modularity <= best + 1e-9, "seed {seed}");
        // reported Q is the Q of the reported assignment
        let recomputed = modularity_by_definition(&g, &found.assignment);
        assert!((found.modularity - recomputed).abs() < 1e-9);
        assert!(found.modularity >= 0.0);
    }
}

#[test]
fn partition_counts_match_bell_numbers() {
    let bell = [1, 1, 2, 5, 15, 52, 203, 877];
    for (n, &b) in bell.iter().enumerate().skip(1) {
        assert_eq!(all_partitions(n).len(), b);
    }
}

/// Renames every node so that ids come out permuted.
fn relabel(g: &SemanticGraph, perm: &[usize]) -> (SemanticGraph, Vec<u32>) {
    let names: Vec<String> = perm.iter().map(|p| format!("r{p:02}")).collect();
    let edges: Vec<(&str, &str, u64)> = g
        .edges()
        .iter()
        .map(|e| (names[e.source as usize].as_str(), names[e.target as usize].as_str(), e.weight))
        .collect();
    let h = SemanticGraph::from_edges(&edges).unwrap();
    let map = (0..g.node_count()).map(|v| h.id_of(&names[v]).unwrap()).collect();
    (h, map)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_preserves_metrics(seed in 0u64..10_000, n in 3usize..16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(g) = random_graph(&mut rng, n, 0.35) else { return Ok(()) };
        let mut perm: Vec<usize> = (0..g.node_count()).collect();
        perm.shuffle(&mut rng);
        let (h, map) = relabel(&g, &perm);

        prop_assert_eq!(density(&g).ok(), density(&h).ok());
        let (a, b) = (average_path_length(&g).ok(), average_path_length(&h).ok());
        prop_assert_eq!(a.is_some(), b.is_some());
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let bg = sorted(betweenness_centrality(&g).scores);
        let bh = sorted(betweenness_centrality(&h).scores);
        for (x, y) in bg.iter().zip(&bh) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert_eq!(sorted(degree_centrality(&g).scores), sorted(degree_centrality(&h).scores));

        let labels: Vec<u32> = (0..g.node_count()).map(|_| rng.gen_range(0..3)).collect();
        let mut moved = vec![0; labels.len()];
        for (v, &l) in labels.iter().enumerate() {
            moved[map[v] as usize] = l;
        }
        let (qg, qh) = (modularity_of(&g, &labels).unwrap(), modularity_of(&h, &moved).unwrap());
        prop_assert!((qg - qh).abs() < 1e-12);
        prop_assert!((qg - modularity_by_definition(&g, &labels)).abs() < 1e-9);
    }

    #[test]
    fn metric_ranges(seed in 0u64..10_000, n in 2usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(g) = random_graph(&mut rng, n, 0.3) else { return Ok(()) };
        if let Ok(d) = density(&g) {
            prop_assert!((0.0..=1.0).contains(&d));
        }
        if let Ok(l) = average_path_length(&g) {
            prop_assert!(l >= 1.0);
        }
        let p = louvain(&g, 1.0, seed);
        prop_assert!((-0.5..=1.0).contains(&p.modularity));
        prop_assert_eq!(p.assignment.len(), g.node_count());
        for s in betweenness_centrality(&g).scores {
            prop_assert!(s >= 0.0);
        }
    }
}
