//! Brute-force reference implementations used as test oracles.
//!
//! Each oracle is written the slow, obvious way and shares no code with the
//! library beyond the graph accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use semnet::graph::SemanticGraph;
use semnet::text::Document;

/// Erdős–Rényi graph on `n` candidate nodes named `v00`…; nodes left
/// without edges are not part of the result.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Option<SemanticGraph> {
    let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((names[i].as_str(), names[j].as_str(), rng.gen_range(1..=5u64)));
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    Some(SemanticGraph::from_edges(&edges).expect("valid edges"))
}

fn bfs(g: &SemanticGraph, s: u32) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[s as usize] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        let d = dist[v as usize].unwrap();
        for &(w, _) in g.neighbors(v) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

/// Betweenness by listing every shortest path of every unordered pair.
pub fn naive_betweenness(g: &SemanticGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    for s in 0..n as u32 {
        let ds = bfs(g, s);
        for t in s + 1..n as u32 {
            let Some(target) = ds[t as usize] else { continue };
            let mut paths: Vec<Vec<u32>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                if path.len() - 1 >= target {
                    continue;
                }
                for &(w, _) in g.neighbors(last) {
                    if !path.contains(&w) {
                        let mut next = path.clone();
                        next.push(w);
                        stack.push(next);
                    }
                }
            }
            paths.retain(|p| p.len() - 1 == target);
            let total = paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    score[v as usize] += 1.0 / total;
                }
            }
        }
    }
    score
}

/// Mean hop distance over the largest component via Floyd–Warshall. Among
/// equally large components the one with more edges, then more weight,
/// then the smaller mean distance wins.
pub fn floyd_warshall_apl(g: &SemanticGraph) -> Option<f64> {
    let n = g.node_count();
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in g.edges() {
        d[e.source as usize][e.target as usize] = 1;
        d[e.target as usize][e.source as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| d[i][j] < INF).collect();
        for &j in &comp {
            seen[j] = true;
        }
        comps.push(comp);
    }
    let mean = |c: &[usize]| {
        let mut sum = 0usize;
        let mut pairs = 0usize;
        for (a, &i) in c.iter().enumerate() {
            for &j in &c[a + 1..] {
                sum += d[i][j];
                pairs += 1;
            }
        }
        sum as f64 / pairs as f64
    };
    let stats = |c: &[usize]| {
        let edges = g
            .edges()
            .iter()
            .filter(|e| c.contains(&(e.source as usize)))
            .collect::<Vec<_>>();
        (edges.len(), edges.iter().map(|e| e.weight).sum::<u64>())
    };
    let size = comps.iter().map(Vec::len).max()?;
    if size < 2 {
        return None;
    }
    let mut best: Option<(usize, u64, f64)> = None;
    for c in comps.iter().filter(|c| c.len() == size) {
        let (e, w) = stats(c);
        let m = mean(c);
        let better = match best {
            None => true,
            Some((be, bw, bm)) => (e, w) > (be, bw) || ((e, w) == (be, bw) && m < bm),
        };
        if better {
            best = Some((e, w, m));
        }
    }
    best.map(|b| b.2)
}

/// Weighted modularity straight from the definition, summing over all
/// ordered node pairs.
pub fn modularity_by_definition(g: &SemanticGraph, labels: &[u32]) -> f64 {
    let n = g.node_count();
    let two_m: f64 = 2.0 * g.edges().iter().map(|e| e.weight as f64).sum::<f64>();
    let k: Vec<f64> = (0..n as u32).map(|v| g.weighted_degree(v) as f64).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                continue;
            }
            let a = g.weight(i as u32, j as u32).unwrap_or(0) as f64;
            q += a - k[i] * k[j] / two_m;
        }
    }
    q / two_m
}

/// Every set partition of `n` items as restricted-growth label vectors.
pub fn all_partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            if i == 0 && l > 0 {
                break;
            }
            cur.push(l);
            rec(i + 1, n, max.max(l), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Counts by visiting every window and, separately, every candidate pair.
pub fn cooccurrence_oracle(
    docs: &[Document],
    w: usize,
) -> (BTreeMap<String, u64>, BTreeMap<(String, String), u64>) {
    let mut freq = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for doc in docs {
        for s in &doc.sentences {
            for l in s {
                *freq.entry(l.clone()).or_insert(0) += 1;
            }
        }
        let n = doc.sentences.len();
        if n == 0 {
            continue;
        }
        let starts = if n <= w { 1 } else { n - w + 1 };
        let windows: Vec<BTreeSet<&String>> = (0..starts)
            .map(|st| doc.sentences[st..(st + w).min(n)].iter().flatten().collect())
            .collect();
        let vocab: BTreeSet<&String> = doc.sentences.iter().flatten().collect();
        for a in &vocab {
            for b in &vocab {
                if a < b {
                    let c = windows.iter().filter(|win| win.contains(a) && win.contains(b)).count();
                    if c > 0 {
                        *pairs.entry(((*a).clone(), (*b).clone())).or_insert(0) += c as u64;
                    }
                }
            }
        }
    }
    (freq, pairs)
}

/// Adjusted Rand index of two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let mut table: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, f64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1.0;
        *rows.entry(x).or_default() += 1.0;
        *cols.entry(y).or_default() += 1.0;
    }
    let c2 = |x: f64| x * (x - 1.0) / 2.0;
    let index: f64 = table.values().map(|&v| c2(v)).sum();
    let sum_a: f64 = rows.values().map(|&v| c2(v)).sum();
    let sum_b: f64 = cols.values().map(|&v| c2(v)).sum();
    let expected = sum_a * sum_b / c2(n);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Two triangles joined by a single bridge edge `c`–`d`.
pub fn two_triangles() -> SemanticGraph {
    SemanticGraph::from_edges(&[
        ("a", "b", 1),
        ("a", "c", 1),
        ("b", "c", 1),
        ("c", "d", 1),
        ("d", "e", 1),
        ("d", "f", 1),
        ("e", "f", 1),
    ])
    .unwrap()
}
