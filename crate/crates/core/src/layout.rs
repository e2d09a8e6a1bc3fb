//! Fruchterman-Reingold force-directed layout.
//!
//! Nodes repel each other with force `k²/d` and edges pull their endpoints
//! together with force `d²/k`, where `k = C·sqrt(width·height/n)`. Each
//! step moves a node along its net force by at most the current temperature,
//! which cools linearly from `min(width, height)/10` towards zero. Positions
//! are clamped to the frame after every step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Network;

/// Distances below this count as coincident.
const COINCIDENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutParams {
    pub width: f64,
    pub height: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Scale factor `C` on the ideal edge length.
    pub spring_scale: f64,
    /// Multiply attraction by edge weight.
    pub weighted_attraction: bool,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            width: 1000.0,
            height: 1000.0,
            iterations: 500,
            seed: 42,
            spring_scale: 1.0,
            weighted_attraction: false,
        }
    }
}

impl LayoutParams {
    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(Error::InvalidArgument("layout frame must have positive size".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("layout needs at least one iteration".into()));
        }
        if !(self.spring_scale > 0.0) {
            return Err(Error::InvalidArgument("spring scale must be positive".into()));
        }
        Ok(())
    }

    pub fn spring_length(&self, n: usize) -> f64 {
        self.spring_scale * (self.width * self.height / n.max(1) as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodePosition {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

/// Final positions, in network node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutCoords {
    pub positions: Vec<NodePosition>,
    pub iterations_run: usize,
    pub seed: u64,
    pub width: f64,
    pub height: f64,
    /// Ideal edge length `k` used by the simulation.
    pub spring_length: f64,
}

impl LayoutCoords {
    pub fn get(&self, id: &str) -> Option<(f64, f64)> {
        self.positions.iter().find(|p| p.id == id).map(|p| (p.x, p.y))
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.positions.iter().map(|p| [p.x, p.y]).collect()
    }

    /// True if every node of `net` has a finite position inside the frame.
    pub fn covers(&self, net: &Network) -> bool {
        self.positions.len() == net.node_count()
            && self
                .positions
                .iter()
                .zip(net.nodes())
                .all(|(p, n)| p.id == n.id && in_frame(p.x, p.y, self.width, self.height))
    }
}

fn in_frame(x: f64, y: f64, w: f64, h: f64) -> bool {
    x.is_finite() && y.is_finite() && (0.0..=w).contains(&x) && (0.0..=h).contains(&y)
}

pub fn fruchterman_reingold(net: &Network, params: &LayoutParams) -> Result<LayoutCoords> {
    fruchterman_reingold_observed(net, params, None, |_, _| {})
}

/// Full-control variant: optional starting positions (in node order) and an
/// observer called with the iteration number and positions after each step.
pub fn fruchterman_reingold_observed(
    net: &Network,
    params: &LayoutParams,
    initial: Option<Vec<[f64; 2]>>,
    mut observer: impl FnMut(usize, &[[f64; 2]]),
) -> Result<LayoutCoords> {
    params.validate()?;
    let n = net.node_count();
    let k = params.spring_length(n);
    let finish = |pos: Vec<[f64; 2]>, iterations_run| LayoutCoords {
        positions: net
            .nodes()
            .iter()
            .zip(pos)
            .map(|(node, [x, y])| NodePosition {
                id: node.id.clone(),
                x,
                y,
            })
            .collect(),
        iterations_run,
        seed: params.seed,
        width: params.width,
        height: params.height,
        spring_length: k,
    };

    if n == 1 {
        return Ok(finish(vec![[params.width / 2.0, params.height / 2.0]], 0));
    }

    let mut pos = match initial {
        Some(p) => {
            if p.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "initial layout has {} positions for {n} nodes",
                    p.len()
                )));
            }
            p
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            (0..n)
                .map(|_| [rng.gen_range(0.0..=params.width), rng.gen_range(0.0..=params.height)])
                .collect()
        }
    };

    let t0 = params.width.min(params.height) / 10.0;
    for it in 0..params.iterations {
        let temperature = t0 * (1.0 - it as f64 / params.iterations as f64);
        let disp = displacements(net, &pos, k, params.weighted_attraction, params.seed, it);
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let step = len.min(temperature) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
            p[0] = p[0].clamp(0.0, params.width);
            p[1] = p[1].clamp(0.0, params.height);
        }
        observer(it, &pos);
    }
    Ok(finish(pos, params.iterations))
}

/// Net force on every node. Each node sums its own contributions in a fixed
/// order, so the result does not depend on how nodes are scheduled.
pub(crate) fn displacements(
    net: &Network,
    pos: &[[f64; 2]],
    k: f64,
    weighted: bool,
    seed: u64,
    iteration: usize,
) -> Vec<[f64; 2]> {
    let k2 = k * k;
    let force_on = |i: usize| -> [f64; 2] {
        let mut f = [0.0, 0.0];
        let [xi, yi] = pos[i];
        for (j, &[xj, yj]) in pos.iter().enumerate() {
            if j == i {
                continue;
            }
            let (dx, dy) = separation(xi - xj, yi - yj, i, j, seed, iteration);
            let d2 = dx * dx + dy * dy;
            // k²/d along the unit vector (dx, dy)/d.
            f[0] += dx * k2 / d2;
            f[1] += dy * k2 / d2;
        }
        for &(j, w) in net.neighbors(i) {
            let (dx, dy) = separation(xi - pos[j][0], yi - pos[j][1], i, j, seed, iteration);
            let d = dx.hypot(dy);
            let scale = if weighted { w } else { 1.0 };
            // d²/k along the unit vector.
            f[0] -= dx * d / k * scale;
            f[1] -= dy * d / k * scale;
        }
        f
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..pos.len()).into_par_iter().map(force_on).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..pos.len()).map(force_on).collect()
    }
}

/// Returns `(dx, dy)` unchanged unless the two nodes coincide, in which case
/// it substitutes a tiny offset in a direction derived from the seed, the
/// iteration and the pair. The offset for `(j, i)` is the negation of the one
/// for `(i, j)`.
fn separation(dx: f64, dy: f64, i: usize, j: usize, seed: u64, iteration: usize) -> (f64, f64) {
    if dx * dx + dy * dy >= COINCIDENT * COINCIDENT {
        return (dx, dy);
    }
    let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    let h = splitmix(seed ^ splitmix(lo as u64) ^ splitmix((hi as u64) << 32 | iteration as u64));
    let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    let r = 1e-6;
    (sign * r * angle.cos(), sign * r * angle.sin())
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutEnergy {
    /// `Σ_edges d³ / (3k)`.
    pub attractive: f64,
    /// `Σ_pairs k² ln(D / d)`, `D` the frame diagonal, floored at 0.
    pub repulsive: f64,
}

impl LayoutEnergy {
    pub fn total(&self) -> f64 {
        self.attractive + self.repulsive
    }
}

/// Potential energy of a layout, for convergence monitoring.
pub fn layout_energy(net: &Network, coords: &LayoutCoords) -> Result<LayoutEnergy> {
    if coords.positions.len() != net.node_count() {
        return Err(Error::InvalidArgument("layout does not cover the network".into()));
    }
    Ok(energy_of(
        net,
        &coords.points(),
        coords.spring_length,
        coords.width.hypot(coords.height),
    ))
}

pub(crate) fn energy_of(net: &Network, pos: &[[f64; 2]], k: f64, diagonal: f64) -> LayoutEnergy {
    let dist = |a: usize, b: usize| (pos[a][0] - pos[b][0]).hypot(pos[a][1] - pos[b][1]);
    let attractive = net
        .edges()
        .iter()
        .map(|e| dist(e.source, e.target).powi(3) / (3.0 * k))
        .sum();
    let mut repulsive = 0.0;
    for a in 0..pos.len() {
        for b in a + 1..pos.len() {
            let d = dist(a, b).max(COINCIDENT);
            repulsive += k * k * (diagonal / d).ln().max(0.0);
        }
    }
    LayoutEnergy { attractive, repulsive }
}

/// Energy of raw positions under the given parameters.
pub fn energy_at(net: &Network, params: &LayoutParams, pos: &[[f64; 2]]) -> LayoutEnergy {
    energy_of(
        net,
        pos,
        params.spring_length(net.node_count()),
        params.width.hypot(params.height),
    )
}
