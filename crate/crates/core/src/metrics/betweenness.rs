use std::collections::VecDeque;

use rayon::prelude::*;

use super::CentralityTable;
use crate::graph::{NodeId, SemanticGraph};

/// Sources per parallel task. Chunk sums are combined in chunk order, so the
/// float result does not depend on thread scheduling.
const CHUNK: usize = 32;

/// Unnormalized shortest-path betweenness (Brandes), unweighted hops,
/// endpoints excluded, each unordered pair counted once.
pub fn betweenness_centrality(g: &SemanticGraph) -> CentralityTable {
    let n = g.node_count();
    let sources: Vec<NodeId> = g.node_ids().collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut scratch = Scratch::new(n);
            for &s in chunk {
                accumulate(g, s, &mut scratch, &mut acc);
            }
            acc
        })
        .collect();

    let mut scores = vec![0.0; n];
    for part in partials {
        for (s, p) in scores.iter_mut().zip(part) {
            *s += p;
        }
    }
    // Undirected: every pair was seen from both ends.
    for s in &mut scores {
        *s /= 2.0;
    }
    CentralityTable::new(g, "betweenness", scores)
}

struct Scratch {
    stack: Vec<NodeId>,
    preds: Vec<Vec<NodeId>>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    queue: VecDeque<NodeId>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            queue: VecDeque::with_capacity(n),
        }
    }

    fn reset(&mut self) {
        self.stack.clear();
        self.queue.clear();
        for p in &mut self.preds {
            p.clear();
        }
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
    }
}

fn accumulate(g: &SemanticGraph, s: NodeId, st: &mut Scratch, acc: &mut [f64]) {
    st.reset();
    let si = s as usize;
    st.sigma[si] = 1.0;
    st.dist[si] = 0;
    st.queue.push_back(s);
    while let Some(v) = st.queue.pop_front() {
        st.stack.push(v);
        let vi = v as usize;
        for &(w, _) in g.neighbors(v) {
            let wi = w as usize;
            if st.dist[wi] < 0 {
                st.dist[wi] = st.dist[vi] + 1;
                st.queue.push_back(w);
            }
            if st.dist[wi] == st.dist[vi] + 1 {
                st.sigma[wi] += st.sigma[vi];
                st.preds[wi].push(v);
            }
        }
    }
    while let Some(w) = st.stack.pop() {
        let wi = w as usize;
        let coeff = (1.0 + st.delta[wi]) / st.sigma[wi];
        for &v in &st.preds[wi] {
            st.delta[v as usize] += st.sigma[v as usize] * coeff;
        }
        if w != s {
            acc[wi] += st.delta[wi];
        }
    }
}
