//! Macro scores (density, average path length) and the micro score
//! (betweenness centrality).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

/// Share of possible edges present, `2m / (n(n-1))`. Weights are ignored.
pub fn density(net: &Network) -> Result<f64> {
    let n = net.node_count();
    if n < 2 {
        return Err(Error::undefined("density", format!("needs at least 2 nodes, got {n}")));
    }
    let m = net.edge_count() as f64;
    Ok(2.0 * m / (n as f64 * (n as f64 - 1.0)))
}

/// Which node pairs enter the average path length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AplPolicy {
    /// Every unordered pair joined by some path.
    #[default]
    ReachablePairs,
    /// Every unordered pair inside the largest connected component.
    LargestComponent,
}

impl AplPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            AplPolicy::ReachablePairs => "reachable_pairs",
            AplPolicy::LargestComponent => "largest_component",
        }
    }
}

/// BFS hop distances from `source`; `u32::MAX` marks unreachable nodes.
fn hop_distances(net: &Network, source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; net.node_count()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in net.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Mean shortest-path hop count over unordered pairs selected by `policy`.
pub fn average_path_length(net: &Network, policy: AplPolicy) -> Result<f64> {
    let sources: Vec<usize> = match policy {
        AplPolicy::ReachablePairs => (0..net.node_count()).collect(),
        AplPolicy::LargestComponent => net.connected_components().into_iter().next().unwrap_or_default(),
    };
    // Within a component every pair is reachable, so both policies reduce to
    // summing over reachable pairs from the chosen sources.
    let per_source = |&s: &usize| -> (u64, u64) {
        hop_distances(net, s)
            .iter()
            .enumerate()
            .skip(s + 1)
            .filter(|&(_, &d)| d != u32::MAX)
            .fold((0, 0), |(sum, count), (_, &d)| (sum + u64::from(d), count + 1))
    };

    #[cfg(feature = "parallel")]
    let (total, pairs) = {
        use rayon::prelude::*;
        sources
            .par_iter()
            .map(per_source)
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    #[cfg(not(feature = "parallel"))]
    let (total, pairs) = sources
        .iter()
        .map(per_source)
        .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    if pairs == 0 {
        return Err(Error::undefined("average_path_length", "no pair of nodes is connected"));
    }
    Ok(total as f64 / pairs as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityEntry {
    pub id: String,
    pub label: String,
    pub score: f64,
}

/// Per-node scores in network node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub entries: Vec<CentralityEntry>,
    pub normalized: bool,
    pub weighted: bool,
}

impl CentralityVector {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.score)
    }

    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.score).collect()
    }

    pub fn max_score(&self) -> f64 {
        self.entries.iter().map(|e| e.score).fold(0.0, f64::max)
    }
}

/// How per-source contributions are scheduled. Both produce bit-identical
/// results: sources are grouped into fixed chunks and chunk sums are added in
/// source order either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Serial,
}

const SOURCE_CHUNK: usize = 32;

/// Brandes betweenness centrality, each unordered pair counted once.
///
/// Unweighted runs BFS; weighted runs Dijkstra with edge cost `1 / weight`.
/// Normalized scores are divided by `(n-1)(n-2)/2`.
pub fn betweenness(net: &Network, weighted: bool, normalized: bool) -> Result<CentralityVector> {
    betweenness_with(net, weighted, normalized, Execution::Parallel)
}

pub fn betweenness_with(
    net: &Network,
    weighted: bool,
    normalized: bool,
    execution: Execution,
) -> Result<CentralityVector> {
    let n = net.node_count();
    if normalized && n < 3 {
        return Err(Error::undefined(
            "betweenness",
            format!("normalization needs at least 3 nodes, got {n}"),
        ));
    }
    if weighted {
        if let Some(e) = net.edges().iter().find(|e| !(e.weight > 0.0 && e.weight.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "weighted betweenness needs positive weights, edge {}-{} has {}",
                net.node(e.source).id,
                net.node(e.target).id,
                e.weight
            )));
        }
    }

    let chunk_sum = |chunk: &[usize]| -> Vec<f64> {
        let mut acc = vec![0.0; n];
        let mut ws = Workspace::new(n);
        for &s in chunk {
            if weighted {
                ws.dijkstra(net, s);
            } else {
                ws.bfs(net, s);
            }
            ws.accumulate(s, &mut acc);
        }
        acc
    };

    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            sources.par_chunks(SOURCE_CHUNK).map(chunk_sum).collect()
        }
        _ => sources.chunks(SOURCE_CHUNK).map(chunk_sum).collect(),
    };

    let mut scores = vec![0.0; n];
    for p in &partials {
        for (s, v) in scores.iter_mut().zip(p) {
            *s += v;
        }
    }
    let scale = if normalized {
        // Halving for unordered pairs, then dividing by C(n-1, 2).
        0.5 / ((n as f64 - 1.0) * (n as f64 - 2.0) / 2.0)
    } else {
        0.5
    };
    Ok(CentralityVector {
        entries: net
            .nodes()
            .iter()
            .zip(scores)
            .map(|(node, s)| CentralityEntry {
                id: node.id.clone(),
                label: node.label.clone(),
                score: s * scale,
            })
            .collect(),
        normalized,
        weighted,
    })
}

/// Per-source scratch space for Brandes' algorithm.
struct Workspace {
    order: Vec<usize>,
    preds: Vec<Vec<usize>>,
    sigma: Vec<f64>,
    dist: Vec<f64>,
    delta: Vec<f64>,
}

#[derive(PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance, then node index.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Path costs within this relative tolerance count as equally short, so sums
/// like 1/3 + 1/3 + 1/3 and 1/1 tie.
fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            order: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![0.0; n],
            dist: vec![f64::INFINITY; n],
            delta: vec![0.0; n],
        }
    }

    fn reset(&mut self, s: usize) {
        self.order.clear();
        for p in &mut self.preds {
            p.clear();
        }
        self.sigma.fill(0.0);
        self.dist.fill(f64::INFINITY);
        self.delta.fill(0.0);
        self.sigma[s] = 1.0;
        self.dist[s] = 0.0;
    }

    fn bfs(&mut self, net: &Network, s: usize) {
        self.reset(s);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            self.order.push(v);
            for &(w, _) in net.neighbors(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = self.dist[v] + 1.0;
                    queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1.0 {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, net: &Network, s: usize) {
        self.reset(s);
        let mut settled = vec![false; self.dist.len()];
        let mut heap = BinaryHeap::from([Frontier { dist: 0.0, node: s }]);
        while let Some(Frontier { dist, node: v }) = heap.pop() {
            if settled[v] || dist > self.dist[v] {
                continue;
            }
            settled[v] = true;
            self.order.push(v);
            for &(w, weight) in net.neighbors(v) {
                if settled[w] {
                    continue;
                }
                let candidate = self.dist[v] + 1.0 / weight;
                if self.dist[w].is_finite() && same_length(candidate, self.dist[w]) {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                } else if candidate < self.dist[w] {
                    self.dist[w] = candidate;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    heap.push(Frontier {
                        dist: candidate,
                        node: w,
                    });
                }
            }
        }
    }

    /// Back-propagates dependencies in reverse discovery order.
    fn accumulate(&mut self, s: usize, acc: &mut [f64]) {
        while let Some(w) = self.order.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub rank: usize,
    pub id: String,
    pub label: String,
    pub score: f64,
}

/// The `k` highest scores, ties broken by label then id, ascending.
pub fn top_k(centrality: &CentralityVector, k: usize) -> Vec<RankedNode> {
    let mut sorted: Vec<&CentralityEntry> = centrality.entries.iter().collect();
    sorted.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| a.id.cmp(&b.id))
    });
    sorted
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, e)| RankedNode {
            rank: i + 1,
            id: e.id.clone(),
            label: e.label.clone(),
            score: e.score,
        })
        .collect()
}
