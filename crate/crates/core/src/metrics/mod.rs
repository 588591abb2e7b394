//! Topological metrics over a [`SemanticGraph`].
//!
//! Path lengths and betweenness use unweighted hop distance: co-occurrence
//! weights measure association strength, not distance. Modularity and
//! Louvain use edge weights unless [`EdgeWeighting::Unweighted`] is asked for.

mod betweenness;
mod community;

pub use betweenness::betweenness_centrality;
pub use community::{
    louvain, louvain_with, modularity_of, modularity_with, CommunityPartition, LouvainConfig,
};

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, SemanticGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("metric undefined: {0}")]
    Undefined(String),
    #[error("assignment covers {got} nodes, graph has {expected}")]
    IncompleteAssignment { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeWeighting {
    #[default]
    Weighted,
    /// Every edge counts as weight 1.
    Unweighted,
}

impl EdgeWeighting {
    pub(crate) fn apply(self, w: u64) -> f64 {
        match self {
            EdgeWeighting::Weighted => w as f64,
            EdgeWeighting::Unweighted => 1.0,
        }
    }
}

/// `2E / (V (V - 1))`, edges counted once regardless of weight.
pub fn density(g: &SemanticGraph) -> Result<f64, MetricError> {
    let v = g.node_count();
    if v < 2 {
        return Err(MetricError::Undefined(format!(
            "density needs at least 2 nodes, graph has {v}"
        )));
    }
    let e = g.edge_count() as f64;
    let v = v as f64;
    Ok(2.0 * e / (v * (v - 1.0)))
}

/// Connected components, each sorted; ordered by their smallest node id.
pub fn connected_components(g: &SemanticGraph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in g.node_ids() {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in g.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// The component with most nodes. Ties are broken by properties that do not
/// depend on node labels: more edges, then more total weight, then the
/// shorter mean hop distance; only fully equivalent components fall back to
/// the smallest id.
pub fn largest_component(g: &SemanticGraph) -> Vec<NodeId> {
    let comps = connected_components(g);
    let size = comps.iter().map(Vec::len).max().unwrap_or(0);
    let mut tied: Vec<Vec<NodeId>> = comps.into_iter().filter(|c| c.len() == size).collect();
    if tied.len() <= 1 {
        return tied.pop().unwrap_or_default();
    }
    let key = |c: &Vec<NodeId>| {
        let degree: usize = c.iter().map(|&v| g.degree(v)).sum();
        let weight: u64 = c.iter().map(|&v| g.weighted_degree(v)).sum();
        (degree, weight, std::cmp::Reverse(distance_sum(g, c)))
    };
    let best = tied.iter().map(key).max().expect("non-empty");
    tied.into_iter()
        .find(|c| key(c) == best)
        .expect("maximum is attained")
}

/// Sum of hop distances over ordered pairs of a connected node set.
fn distance_sum(g: &SemanticGraph, comp: &[NodeId]) -> u64 {
    comp.par_iter()
        .map(|&s| {
            let dist = bfs_distances(g, s);
            comp.iter().map(|&t| dist[t as usize] as u64).sum::<u64>()
        })
        .sum()
}

/// Hop distances from `source`; `u32::MAX` marks unreachable nodes.
pub(crate) fn bfs_distances(g: &SemanticGraph, source: NodeId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.node_count()];
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = dist[v as usize] + 1;
        for &(w, _) in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Mean hop distance over unordered node pairs of the largest connected
/// component.
pub fn average_path_length(g: &SemanticGraph) -> Result<f64, MetricError> {
    if g.edge_count() == 0 {
        return Err(MetricError::Undefined("graph has no edges".into()));
    }
    let comp = largest_component(g);
    let total = distance_sum(g, &comp);
    let k = comp.len() as u64;
    // `total` counts each unordered pair twice.
    Ok(total as f64 / (k * (k - 1)) as f64)
}

/// Per-node scores with a deterministic ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityTable {
    pub metric: String,
    /// Indexed by node id.
    pub scores: Vec<f64>,
    /// Node ids by descending score; ties by lemma.
    pub ranking: Vec<NodeId>,
}

impl CentralityTable {
    pub fn new(g: &SemanticGraph, metric: impl Into<String>, scores: Vec<f64>) -> Self {
        assert_eq!(scores.len(), g.node_count());
        let mut ranking: Vec<NodeId> = g.node_ids().collect();
        ranking.sort_by(|&a, &b| {
            scores[b as usize]
                .total_cmp(&scores[a as usize])
                .then_with(|| g.lemma(a).cmp(g.lemma(b)))
        });
        Self {
            metric: metric.into(),
            scores,
            ranking,
        }
    }

    pub fn score(&self, id: NodeId) -> f64 {
        self.scores[id as usize]
    }

    /// The first `k` entries of the ranking as `(lemma, score)`.
    pub fn top<'g>(&self, g: &'g SemanticGraph, k: usize) -> Vec<(&'g str, f64)> {
        self.ranking
            .iter()
            .take(k)
            .map(|&id| (g.lemma(id), self.score(id)))
            .collect()
    }
}

/// Number of distinct neighbors.
pub fn degree_centrality(g: &SemanticGraph) -> CentralityTable {
    let scores = g.node_ids().map(|v| g.degree(v) as f64).collect();
    CentralityTable::new(g, "degree", scores)
}

/// A node whose neighbors fall in two or more communities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgingConcept {
    pub lemma: String,
    pub node: NodeId,
    pub betweenness: f64,
    /// Communities of the node's neighbors, ascending.
    pub communities: Vec<u32>,
}

pub fn bridging_concepts(
    g: &SemanticGraph,
    partition: &CommunityPartition,
    betweenness: &CentralityTable,
    top_n: usize,
) -> Vec<BridgingConcept> {
    betweenness
        .ranking
        .iter()
        .filter_map(|&v| {
            let communities: BTreeSet<u32> = g
                .neighbors(v)
                .iter()
                .map(|&(w, _)| partition.assignment[w as usize])
                .collect();
            (communities.len() >= 2).then(|| BridgingConcept {
                lemma: g.lemma(v).to_owned(),
                node: v,
                betweenness: betweenness.score(v),
                communities: communities.into_iter().collect(),
            })
        })
        .take(top_n)
        .collect()
}
