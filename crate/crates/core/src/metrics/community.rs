//! Newman modularity and Louvain community detection.
//!
//! Louvain alternates two phases until a level produces no move: nodes are
//! visited in a seeded shuffle of id order and each joins the neighboring
//! community with the largest modularity gain; then every community is
//! collapsed into a single node whose self-loop carries its internal weight.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EdgeWeighting, MetricError};
use crate::graph::{NodeId, SemanticGraph};

/// Gains at or below this are treated as no improvement.
const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    /// Community of each node, indexed by node id; communities are dense
    /// `0..C` numbered by first appearance in id order.
    pub assignment: Vec<u32>,
    pub modularity: f64,
}

impl CommunityPartition {
    /// Everything in one community.
    pub fn single(g: &SemanticGraph) -> Self {
        Self {
            assignment: vec![0; g.node_count()],
            modularity: 0.0,
        }
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn community_of(&self, id: NodeId) -> u32 {
        self.assignment[id as usize]
    }

    /// Member ids of each community.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(v as NodeId);
        }
        out
    }
}

/// Weighted Newman modularity of an arbitrary labelling.
pub fn modularity_of(g: &SemanticGraph, assignment: &[u32]) -> Result<f64, MetricError> {
    modularity_with(g, assignment, EdgeWeighting::Weighted)
}

/// `Q = sum_c [ W_c / W - (S_c / 2W)^2 ]`. A graph without edges has
/// `Q = 0` for every labelling.
pub fn modularity_with(
    g: &SemanticGraph,
    assignment: &[u32],
    weighting: EdgeWeighting,
) -> Result<f64, MetricError> {
    if assignment.len() != g.node_count() {
        return Err(MetricError::IncompleteAssignment {
            expected: g.node_count(),
            got: assignment.len(),
        });
    }
    let labels = dense_labels(assignment);
    let c = labels.iter().max().map_or(0, |&m| m as usize + 1);
    let mut internal = vec![0.0; c];
    let mut strength = vec![0.0; c];
    let mut total = 0.0;
    for e in g.edges() {
        let w = weighting.apply(e.weight);
        total += w;
        let (cs, ct) = (labels[e.source as usize], labels[e.target as usize]);
        strength[cs as usize] += w;
        strength[ct as usize] += w;
        if cs == ct {
            internal[cs as usize] += w;
        }
    }
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok((0..c)
        .map(|k| internal[k] / total - (strength[k] / (2.0 * total)).powi(2))
        .sum())
}

/// Relabels to `0..C` by first appearance.
fn dense_labels(assignment: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    assignment
        .iter()
        .map(|&c| {
            let next = map.len() as u32;
            *map.entry(c).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    pub resolution: f64,
    pub seed: u64,
    pub weighting: EdgeWeighting,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            seed: 0,
            weighting: EdgeWeighting::Weighted,
        }
    }
}

pub fn louvain(g: &SemanticGraph, resolution: f64, seed: u64) -> CommunityPartition {
    louvain_with(
        g,
        &LouvainConfig {
            resolution,
            seed,
            ..Default::default()
        },
    )
}

pub fn louvain_with(g: &SemanticGraph, config: &LouvainConfig) -> CommunityPartition {
    assert!(config.resolution > 0.0, "resolution must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut level = Level::from_graph(g, config.weighting);
    // community of each original node, in terms of the current level's nodes
    let mut membership: Vec<usize> = (0..g.node_count()).collect();

    if level.two_m > 0.0 {
        loop {
            let (comm, moved) = level.local_moves(config.resolution, &mut rng);
            if !moved {
                break;
            }
            let (renumbered, count) = renumber(&comm);
            for m in &mut membership {
                *m = renumbered[*m];
            }
            level = level.aggregate(&renumbered, count);
        }
    }

    let assignment = dense_labels(&membership.iter().map(|&m| m as u32).collect::<Vec<_>>());
    let modularity = modularity_with(g, &assignment, config.weighting).expect("full assignment");
    if modularity < 0.0 {
        let single = vec![0; g.node_count()];
        let q = modularity_with(g, &single, config.weighting).expect("full assignment");
        return CommunityPartition {
            assignment: single,
            modularity: q,
        };
    }
    CommunityPartition {
        assignment,
        modularity,
    }
}

fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    let out = comm
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (out, next)
}

/// One level of the Louvain hierarchy.
struct Level {
    /// Neighbors other than the node itself, sorted by id.
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    /// Weighted degree, self-loops counted twice.
    degree: Vec<f64>,
    two_m: f64,
}

impl Level {
    fn from_graph(g: &SemanticGraph, weighting: EdgeWeighting) -> Self {
        let n = g.node_count();
        let adj: Vec<Vec<(usize, f64)>> = g
            .node_ids()
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&(w, wt)| (w as usize, weighting.apply(wt)))
                    .collect()
            })
            .collect();
        let degree: Vec<f64> = adj.iter().map(|l| l.iter().map(|&(_, w)| w).sum()).collect();
        let two_m = degree.iter().sum();
        Self {
            adj,
            self_loop: vec![0.0; n],
            degree,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Returns the community of each node and whether any node moved.
    fn local_moves(&self, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot: Vec<f64> = self.degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let ci = comm[i];
                let ki = self.degree[i];
                for &(j, w) in &self.adj[i] {
                    let cj = comm[j];
                    if link[cj] == 0.0 {
                        touched.push(cj);
                    }
                    link[cj] += w;
                }
                tot[ci] -= ki;
                let gain = |c: usize, link_c: f64| link_c - resolution * tot[c] * ki / self.two_m;

                let mut best = ci;
                let mut best_gain = gain(ci, link[ci]);
                touched.sort_unstable();
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                tot[best] += ki;
                if best != ci {
                    comm[i] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (comm, any_move)
    }

    fn aggregate(&self, comm: &[usize], count: usize) -> Self {
        let mut self_loop = vec![0.0; count];
        let mut degree = vec![0.0; count];
        let mut weights: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![Default::default(); count];
        for i in 0..self.len() {
            let ci = comm[i];
            self_loop[ci] += self.self_loop[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if ci == cj {
                    // each internal edge is seen from both ends
                    self_loop[ci] += w / 2.0;
                } else {
                    *weights[ci].entry(cj).or_default() += w;
                }
            }
        }
        let adj = weights.into_iter().map(|m| m.into_iter().collect()).collect();
        Self {
            adj,
            self_loop,
            degree,
            two_m: self.two_m,
        }
    }
}
