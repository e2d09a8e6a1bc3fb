//! Meso scores: modularity and Louvain community detection.
//!
//! Modularity with resolution `γ` is
//!
//! ```text
//! Q = Σ_c [ w_c / W − γ (s_c / 2W)² ]
//! ```
//!
//! where `w_c` is the weight inside community `c`, `s_c` the summed strength
//! (weighted degree) of its members and `W` the total edge weight.
//!
//! [`louvain`] follows the fast-unfolding scheme: sweep nodes in a seeded
//! random order, moving each to the neighboring community with the best
//! modularity gain; once no node moves, collapse communities into single
//! nodes (intra weight becomes a self-loop) and repeat. A final sweep on the
//! original graph makes the result stable under single-node moves.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

/// Community assignment for every node of a network, in network node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// `assignment[i]` is the community of node `i`; ids are contiguous from 0.
    pub assignment: Vec<usize>,
    pub modularity: f64,
    pub resolution: f64,
    pub seed: u64,
}

impl Partition {
    /// Wraps a raw assignment, renumbering communities by size (descending)
    /// and then by smallest member, and computing its modularity.
    pub fn from_assignment(net: &Network, assignment: &[usize], resolution: f64, seed: u64) -> Result<Self> {
        let assignment = canonical_labels(assignment);
        let modularity = modularity(net, &assignment, resolution)?;
        Ok(Partition {
            assignment,
            modularity,
            resolution,
            seed,
        })
    }

    /// Assignment keyed by node id. Every node must be present.
    pub fn from_map(net: &Network, map: &HashMap<String, usize>, resolution: f64, seed: u64) -> Result<Self> {
        let assignment = net
            .nodes()
            .iter()
            .map(|n| {
                map.get(&n.id)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("node {:?} has no community", n.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_assignment(net, &assignment, resolution, seed)
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn community_of(&self, net: &Network, id: &str) -> Option<usize> {
        net.index_of(id).map(|i| self.assignment[i])
    }

    /// Node indices per community.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Relabels so ids run from 0, biggest community first, ties by smallest
/// member index.
fn canonical_labels(assignment: &[usize]) -> Vec<usize> {
    let mut groups: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (node, &c) in assignment.iter().enumerate() {
        let g = groups.entry(c).or_insert((0, node));
        g.0 += 1;
    }
    let mut order: Vec<(usize, usize, usize)> = groups.into_iter().map(|(c, (size, first))| (c, size, first)).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let relabel: HashMap<usize, usize> = order.iter().enumerate().map(|(new, &(old, _, _))| (old, new)).collect();
    assignment.iter().map(|c| relabel[c]).collect()
}

/// Modularity of `assignment` (community per node, in node order).
pub fn modularity(net: &Network, assignment: &[usize], resolution: f64) -> Result<f64> {
    if assignment.len() != net.node_count() {
        return Err(Error::InvalidArgument(format!(
            "assignment covers {} nodes, network has {}",
            assignment.len(),
            net.node_count()
        )));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let k = assignment.iter().max().map_or(0, |&m| m + 1);
    let mut inside = vec![0.0; k];
    let mut strength = vec![0.0; k];
    // Accumulated in one pass and in the same order as the per-community
    // sums, so a single community yields exactly W/W - (2W/2W)^2 = 0.
    let mut total = 0.0;
    for e in net.edges() {
        total += e.weight;
        let (a, b) = (assignment[e.source], assignment[e.target]);
        if a == b {
            inside[a] += e.weight;
            strength[a] += 2.0 * e.weight;
        } else {
            strength[a] += e.weight;
            strength[b] += e.weight;
        }
    }
    if net.edge_count() == 0 || total <= 0.0 {
        return Err(Error::undefined("modularity", "no edges: modularity undefined"));
    }
    let two_w = 2.0 * total;
    Ok(inside
        .iter()
        .zip(&strength)
        .map(|(&w_c, &s_c)| w_c / total - resolution * (s_c / two_w) * (s_c / two_w))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LouvainParams {
    pub resolution: f64,
    pub seed: u64,
    /// Upper bound on aggregation levels.
    pub max_passes: usize,
    /// Number of seeds tried (`seed`, `seed + 1`, ...); the best modularity
    /// wins, ties going to the lowest seed.
    pub restarts: usize,
}

impl Default for LouvainParams {
    fn default() -> Self {
        LouvainParams {
            resolution: 1.0,
            seed: 42,
            max_passes: 32,
            restarts: 1,
        }
    }
}

/// One Louvain run.
pub fn louvain(net: &Network, resolution: f64, seed: u64, max_passes: usize) -> Result<Partition> {
    if net.edge_count() == 0 {
        return Err(Error::undefined("modularity", "no edges: modularity undefined"));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    if max_passes == 0 {
        return Err(Error::InvalidArgument("max_passes must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Level::from_network(net);
    let mut membership: Vec<usize> = (0..net.node_count()).collect();
    let mut level = base.clone();

    for _ in 0..max_passes {
        let mut local: Vec<usize> = (0..level.len()).collect();
        let moved = level.move_nodes(&mut local, resolution, &mut rng);
        if !moved {
            break;
        }
        let (renumbered, count) = compact(&local);
        for m in membership.iter_mut() {
            *m = renumbered[*m];
        }
        if count == level.len() {
            break;
        }
        level = level.aggregate(&renumbered, count);
    }

    // Node-level polish so no single relocation can still raise Q.
    base.move_nodes(&mut membership, resolution, &mut rng);

    Partition::from_assignment(net, &membership, resolution, seed)
}

/// Best of `params.restarts` Louvain runs.
pub fn louvain_best(net: &Network, params: &LouvainParams) -> Result<Partition> {
    let seeds: Vec<u64> = (0..params.restarts.max(1) as u64)
        .map(|i| params.seed.wrapping_add(i))
        .collect();
    let run = |&s: &u64| louvain(net, params.resolution, s, params.max_passes);

    #[cfg(feature = "parallel")]
    let runs: Vec<Result<Partition>> = {
        use rayon::prelude::*;
        seeds.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Result<Partition>> = seeds.iter().map(run).collect();

    let mut best: Option<Partition> = None;
    for p in runs {
        let p = p?;
        // Runs arrive in seed order, so strict improvement keeps the lowest seed on ties.
        if best.as_ref().is_none_or(|b| p.modularity > b.modularity) {
            best = Some(p);
        }
    }
    Ok(best.expect("at least one run"))
}

/// Renumbers arbitrary labels to 0..k in order of first appearance.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let out = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Weighted graph at one aggregation level. Self-loop weight is kept apart
/// from the neighbor lists.
#[derive(Debug, Clone)]
struct Level {
    neighbors: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    strength: Vec<f64>,
    two_w: f64,
}

impl Level {
    fn from_network(net: &Network) -> Level {
        let n = net.node_count();
        let neighbors: Vec<Vec<(usize, f64)>> = (0..n).map(|i| net.neighbors(i).to_vec()).collect();
        let strength: Vec<f64> = neighbors.iter().map(|l| l.iter().map(|&(_, w)| w).sum()).collect();
        let two_w = strength.iter().sum();
        Level {
            neighbors,
            self_loop: vec![0.0; n],
            strength,
            two_w,
        }
    }

    fn len(&self) -> usize {
        self.neighbors.len()
    }

    /// Local moving phase. `community` is updated in place; returns whether
    /// any node changed community.
    fn move_nodes(&self, community: &mut [usize], resolution: f64, rng: &mut ChaCha8Rng) -> bool {
        let n = self.len();
        let eps = 1e-12 * self.two_w;
        let mut total = vec![0.0; n.max(community.iter().max().map_or(0, |&m| m + 1))];
        for (i, &c) in community.iter().enumerate() {
            total[c] += self.strength[i];
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut link = vec![0.0; total.len()];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_moved = false;
        for _sweep in 0..1000 {
            let mut moved = false;
            for &i in &order {
                let home = community[i];
                let k_i = self.strength[i];
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
                touched.push(home);
                for &(j, w) in &self.neighbors[i] {
                    let c = community[j];
                    if link[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    link[c] += w;
                }

                total[home] -= k_i;
                let gain = |c: usize| link[c] - resolution * total[c] * k_i / self.two_w;
                let mut best = home;
                let mut best_gain = gain(home);
                for &c in &touched[1..] {
                    let g = gain(c);
                    if g > best_gain + eps {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += k_i;
                if best != home {
                    community[i] = best;
                    moved = true;
                    any_moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        any_moved
    }

    /// Collapses each community into one node.
    fn aggregate(&self, community: &[usize], count: usize) -> Level {
        let mut self_loop = vec![0.0; count];
        let mut strength = vec![0.0; count];
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        for i in 0..self.len() {
            let ci = community[i];
            self_loop[ci] += self.self_loop[i];
            strength[ci] += self.strength[i];
            for &(j, w) in &self.neighbors[i] {
                let cj = community[j];
                if ci == cj {
                    // Each internal edge is seen from both ends.
                    if i < j {
                        self_loop[ci] += w;
                    }
                } else {
                    *links[ci].entry(cj).or_default() += w;
                }
            }
        }
        Level {
            neighbors: links.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loop,
            strength,
            two_w: self.two_w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub community: usize,
    pub size: usize,
    /// `100 * size / n`.
    pub share_percent: f64,
    /// Up to 10 labels, strongest within-community weighted degree first.
    pub top_members: Vec<String>,
}

pub const CENSUS_TOP_MEMBERS: usize = 10;

/// Communities by size (descending, then id ascending) with their share of
/// nodes and most connected members.
pub fn cluster_census(net: &Network, partition: &Partition) -> Result<Vec<CensusRow>> {
    let n = net.node_count();
    if partition.assignment.len() != n {
        return Err(Error::InvalidArgument("partition does not match the network".into()));
    }
    let members = partition.members();
    let mut rows: Vec<CensusRow> = members
        .iter()
        .enumerate()
        .map(|(c, nodes)| {
            let mut ranked: Vec<(f64, &str)> = nodes
                .iter()
                .map(|&v| {
                    let inner: f64 = net
                        .neighbors(v)
                        .iter()
                        .filter(|&&(u, _)| partition.assignment[u] == c)
                        .map(|&(_, w)| w)
                        .sum();
                    (inner, net.node(v).label.as_str())
                })
                .collect();
            ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
            CensusRow {
                community: c,
                size: nodes.len(),
                share_percent: 100.0 * nodes.len() as f64 / n as f64,
                top_members: ranked
                    .into_iter()
                    .take(CENSUS_TOP_MEMBERS)
                    .map(|(_, l)| l.to_string())
                    .collect(),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.size.cmp(&a.size).then(a.community.cmp(&b.community)));
    Ok(rows)
}

/// Asserts that no single node can move to a neighboring community and raise
/// modularity. Used by tests and exposed for downstream validation.
pub fn is_move_stable(net: &Network, partition: &Partition, tolerance: f64) -> Result<bool> {
    let base = modularity(net, &partition.assignment, partition.resolution)?;
    let mut trial = partition.assignment.clone();
    for v in 0..net.node_count() {
        let home = trial[v];
        let mut candidates: Vec<usize> = net.neighbors(v).iter().map(|&(u, _)| trial[u]).collect();
        candidates.sort_unstable();
        candidates.dedup();
        for c in candidates.into_iter().filter(|&c| c != home) {
            trial[v] = c;
            let q = modularity(net, &trial, partition.resolution)?;
            trial[v] = home;
            if q > base + tolerance {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
