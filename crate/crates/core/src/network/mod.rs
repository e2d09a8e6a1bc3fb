//! Undirected weighted networks and the three science-mapping builders.
//!
//! A [`Network`] is always stored in canonical form: nodes sorted by id,
//! edges stored once with `source < target` and sorted by endpoint index.
//! Equality of two networks is therefore equality of their canonical forms.

mod build;

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use build::{build_bibliographic_coupling, build_coauthorship, build_coword, Counting, CowordOptions, EntityLevel};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Author,
    Institution,
    Document,
    Keyword,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Author => "author",
            NodeKind::Institution => "institution",
            NodeKind::Document => "document",
            NodeKind::Keyword => "keyword",
        }
    }

    pub fn parse(s: &str) -> Option<NodeKind> {
        Some(match s {
            "author" => NodeKind::Author,
            "institution" => NodeKind::Institution,
            "document" => NodeKind::Document,
            "keyword" => NodeKind::Keyword,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub attributes: BTreeMap<String, String>,
}

impl Node {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            label: label.into(),
            attributes: BTreeMap::new(),
        }
    }
}

/// Edge between node indices; `source < target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Network {
    name: String,
    kind: NodeKind,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind && self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Network {
    /// Builds a network from nodes and id-addressed edges, putting it in
    /// canonical form and checking every invariant: unique ids, existing
    /// endpoints, no self-loops, one edge per pair, finite positive weights.
    pub fn from_parts<S: AsRef<str>>(
        name: impl Into<String>,
        kind: NodeKind,
        mut nodes: Vec<Node>,
        edges: impl IntoIterator<Item = (S, S, f64)>,
    ) -> Result<Self> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidNetwork(format!("duplicate node id {:?}", w[0].id)));
        }
        let index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();

        let mut canon = Vec::new();
        for (u, v, w) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::InvalidNetwork(format!("edge endpoint {id:?} is not a node")))
            };
            let (a, b) = (lookup(u)?, lookup(v)?);
            if a == b {
                return Err(Error::InvalidNetwork(format!("self-loop on {u:?}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {u:?}-{v:?} has non-positive weight {w}"
                )));
            }
            canon.push(Edge {
                source: a.min(b),
                target: a.max(b),
                weight: w,
            });
        }
        canon.sort_by_key(|e| (e.source, e.target));
        if let Some(w) = canon
            .windows(2)
            .find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::InvalidNetwork(format!(
                "duplicate edge {:?}-{:?}",
                nodes[w[0].source].id, nodes[w[0].target].id
            )));
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        for e in &canon {
            adjacency[e.source].push((e.target, e.weight));
            adjacency[e.target].push((e.source, e.weight));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }

        Ok(Network {
            name: name.into(),
            kind,
            nodes,
            edges: canon,
            index,
            adjacency,
        })
    }

    pub fn empty(name: impl Into<String>, kind: NodeKind) -> Self {
        Network::from_parts::<&str>(name, kind, Vec::new(), []).expect("empty network is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Neighbors of `index` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, index: usize) -> &[(usize, f64)] {
        &self.adjacency[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    /// Weight of the edge between two ids, if any.
    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        let (a, b) = (self.index_of(u)?, self.index_of(v)?);
        self.adjacency[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| self.adjacency[a][i].1)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edges as `(source id, target id, weight)` in canonical order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.edges.iter().map(|e| {
            (
                self.nodes[e.source].id.as_str(),
                self.nodes[e.target].id.as_str(),
                e.weight,
            )
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Rechecks every invariant; networks built through [`Network::from_parts`]
    /// always pass.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Network::from_parts(
            self.name.clone(),
            self.kind,
            self.nodes.clone(),
            self.edge_triples()
                .map(|(u, v, w)| (u.to_string(), v.to_string(), w))
                .collect::<Vec<_>>(),
        )?;
        if &rebuilt != self {
            return Err(Error::InvalidNetwork("network is not in canonical form".into()));
        }
        Ok(())
    }

    /// Keeps edges with weight >= `min_weight`; optionally drops nodes left
    /// without any edge.
    pub fn threshold_filter(&self, min_weight: f64, drop_isolated: bool) -> Network {
        let kept: Vec<&Edge> = self.edges.iter().filter(|e| e.weight >= min_weight).collect();
        let mut keep_node = vec![!drop_isolated; self.nodes.len()];
        for e in &kept {
            keep_node[e.source] = true;
            keep_node[e.target] = true;
        }
        let nodes = self
            .nodes
            .iter()
            .zip(&keep_node)
            .filter(|(_, &k)| k)
            .map(|(n, _)| n.clone())
            .collect();
        let edges: Vec<(&str, &str, f64)> = kept
            .iter()
            .map(|e| {
                (
                    self.nodes[e.source].id.as_str(),
                    self.nodes[e.target].id.as_str(),
                    e.weight,
                )
            })
            .collect();
        Network::from_parts(self.name.clone(), self.kind, nodes, edges).expect("a filtered valid network stays valid")
    }

    /// Maximal connected node sets (as node indices, ascending), ordered by
    /// size descending and then by smallest node id.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        // Node indices follow id order, so comp[0] is the smallest id.
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// [`Network::connected_components`] as node-id sets.
    pub fn connected_component_ids(&self) -> Vec<Vec<String>> {
        self.connected_components()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.nodes[i].id.clone()).collect())
            .collect()
    }

    /// Subnetwork induced by the given node indices.
    pub fn induced(&self, members: &[usize]) -> Network {
        let mut keep = vec![false; self.nodes.len()];
        for &m in members {
            keep[m] = true;
        }
        let nodes = members.iter().map(|&m| self.nodes[m].clone()).collect();
        let edges: Vec<(&str, &str, f64)> = self
            .edges
            .iter()
            .filter(|e| keep[e.source] && keep[e.target])
            .map(|e| {
                (
                    self.nodes[e.source].id.as_str(),
                    self.nodes[e.target].id.as_str(),
                    e.weight,
                )
            })
            .collect();
        Network::from_parts(self.name.clone(), self.kind, nodes, edges)
            .expect("an induced subgraph of a valid network is valid")
    }
}
