//! The weighted, undirected semantic network.
//!
//! Node ids are dense (`0..V`) and follow lexicographic lemma order. Each
//! edge is stored once with `source < target`; adjacency lists are kept in
//! both directions and sorted by neighbor id.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub lemma: String,
    pub frequency: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("node {0:?} has zero frequency")]
    ZeroFrequency(String),
    #[error("edge ({0:?}, {1:?}) refers to an unknown node")]
    UnknownEndpoint(String, String),
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("edge ({0:?}, {1:?}) listed twice")]
    DuplicateEdge(String, String),
    #[error("edge ({0:?}, {1:?}) has zero weight")]
    ZeroWeight(String, String),
    #[error("graph file is inconsistent: {0}")]
    Inconsistent(String),
}

/// On-disk form: nodes in id order and the edge list.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphData {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct SemanticGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, u64)>>,
    index: HashMap<String, NodeId>,
}

impl SemanticGraph {
    /// Builds a graph from `(lemma, frequency)` nodes and `(lemma, lemma,
    /// weight)` edges given in any order.
    pub fn from_parts<S: AsRef<str>>(
        nodes: impl IntoIterator<Item = (S, u64)>,
        edges: impl IntoIterator<Item = (S, S, u64)>,
    ) -> Result<Self, GraphError> {
        let mut sorted: BTreeMap<String, u64> = BTreeMap::new();
        for (lemma, freq) in nodes {
            let lemma = lemma.as_ref().to_owned();
            if freq == 0 {
                return Err(GraphError::ZeroFrequency(lemma));
            }
            if sorted.insert(lemma.clone(), freq).is_some() {
                return Err(GraphError::DuplicateNode(lemma));
            }
        }
        let nodes: Vec<Node> = sorted
            .into_iter()
            .map(|(lemma, frequency)| Node { lemma, frequency })
            .collect();
        let index: HashMap<String, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.lemma.clone(), i as NodeId))
            .collect();

        let mut keyed: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
        for (a, b, weight) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let pair_err = || (a.to_owned(), b.to_owned());
            let (ia, ib) = match (index.get(a), index.get(b)) {
                (Some(&ia), Some(&ib)) => (ia, ib),
                _ => {
                    let (x, y) = pair_err();
                    return Err(GraphError::UnknownEndpoint(x, y));
                }
            };
            if ia == ib {
                return Err(GraphError::SelfLoop(a.to_owned()));
            }
            if weight == 0 {
                let (x, y) = pair_err();
                return Err(GraphError::ZeroWeight(x, y));
            }
            if keyed.insert((ia.min(ib), ia.max(ib)), weight).is_some() {
                let (x, y) = pair_err();
                return Err(GraphError::DuplicateEdge(x, y));
            }
        }
        let edges = keyed
            .into_iter()
            .map(|((source, target), weight)| Edge {
                source,
                target,
                weight,
            })
            .collect();
        Ok(Self::assemble(nodes, edges, index))
    }

    /// Unit-frequency nodes taken from the edge endpoints.
    pub fn from_edges(edges: &[(&str, &str, u64)]) -> Result<Self, GraphError> {
        let mut names: Vec<&str> = edges.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        names.sort_unstable();
        names.dedup();
        Self::from_parts(
            names.into_iter().map(|n| (n, 1)),
            edges.iter().copied(),
        )
    }

    fn assemble(nodes: Vec<Node>, edges: Vec<Edge>, index: HashMap<String, NodeId>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for e in &edges {
            adjacency[e.source as usize].push((e.target, e.weight));
            adjacency[e.target as usize].push((e.source, e.weight));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            nodes,
            edges,
            adjacency,
            index,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn lemma(&self, id: NodeId) -> &str {
        &self.nodes[id as usize].lemma
    }

    pub fn frequency(&self, id: NodeId) -> u64 {
        self.nodes[id as usize].frequency
    }

    pub fn id_of(&self, lemma: &str) -> Option<NodeId> {
        self.index.get(lemma).copied()
    }

    /// `(neighbor, weight)` pairs sorted by neighbor id.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, u64)] {
        &self.adjacency[id as usize]
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency[id as usize].len()
    }

    pub fn weighted_degree(&self, id: NodeId) -> u64 {
        self.adjacency[id as usize].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Symmetric lookup.
    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<u64> {
        let list = self.adjacency.get(a as usize)?;
        list.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn weight_by_lemma(&self, a: &str, b: &str) -> Option<u64> {
        self.weight(self.id_of(a)?, self.id_of(b)?)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        0..self.nodes.len() as NodeId
    }
}

impl TryFrom<GraphData> for SemanticGraph {
    type Error = GraphError;

    fn try_from(data: GraphData) -> Result<Self, GraphError> {
        let names: Vec<String> = data.nodes.iter().map(|n| n.lemma.clone()).collect();
        let name = |id: NodeId| {
            names
                .get(id as usize)
                .cloned()
                .ok_or_else(|| GraphError::Inconsistent(format!("edge endpoint {id} out of range")))
        };
        let mut edges = Vec::with_capacity(data.edges.len());
        for e in &data.edges {
            edges.push((name(e.source)?, name(e.target)?, e.weight));
        }
        let graph = Self::from_parts(
            data.nodes.iter().map(|n| (n.lemma.clone(), n.frequency)),
            edges,
        )?;
        if graph.nodes != data.nodes {
            return Err(GraphError::Inconsistent(
                "nodes are not in lexicographic id order".into(),
            ));
        }
        Ok(graph)
    }
}

impl From<SemanticGraph> for GraphData {
    fn from(g: SemanticGraph) -> Self {
        GraphData {
            nodes: g.nodes,
            edges: g.edges,
        }
    }
}
