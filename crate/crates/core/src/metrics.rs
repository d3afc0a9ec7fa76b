//! Robustness measures over a (possibly damaged) graph: cost, global and
//! local efficiency, giant component size, and connectedness.
//!
//! All pair sums run over ordered pairs and divide by the ordered-pair count,
//! which is equivalent to the unordered convention by symmetry.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId, UNREACHABLE};

/// Which node population sits in the denominators of cost, global
/// efficiency, and local efficiency.
///
/// `Survivors` (the default everywhere in the engine) evaluates the damaged
/// graph on its own terms: N is the alive node count. `InitialPopulation`
/// keeps N at the pre-attack node count instead, for reproducing analyses
/// that never shrink the denominator. Both readings stay available behind
/// this one switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Survivors,
    InitialPopulation,
}

/// The per-trial measurement bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsVector {
    pub connected: bool,
    pub cost: f64,
    pub e_glob: f64,
    pub e_loc: f64,
    pub giant: usize,
    pub n_alive: usize,
    /// Diagnostic: largest betweenness score among survivors.
    pub betweenness_max: f64,
}

fn population(g: &Graph, basis: Basis) -> usize {
    match basis {
        Basis::Survivors => g.alive_count(),
        Basis::InitialPopulation => g.node_count(),
    }
}

/// Edge density 2k / (N(N-1)). Defined as 0 for degenerate graphs with
/// fewer than two nodes in the chosen population.
pub fn cost_with_basis(g: &Graph, basis: Basis) -> f64 {
    let n = population(g, basis);
    if n <= 1 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n as f64 * (n - 1) as f64)
}

pub fn cost(g: &Graph) -> f64 {
    cost_with_basis(g, Basis::Survivors)
}

/// Mean inverse shortest-path length over ordered pairs, with unreachable
/// pairs contributing 0. Valid connected or disconnected, always in [0, 1].
pub fn global_efficiency_with_basis(g: &Graph, basis: Basis) -> f64 {
    let n = population(g, basis);
    if n <= 1 || g.alive_count() == 0 {
        return 0.0;
    }
    let sources: Vec<NodeId> = g.alive_nodes().collect();
    // Per-source sums are collected in source order and reduced sequentially
    // so the floating-point result never depends on thread count.
    let per_source: Vec<f64> = sources
        .par_chunks(64)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&s| {
                    let row = g.bfs_distances(s).expect("alive source");
                    row.raw()
                        .iter()
                        .map(|&d| match d {
                            0 | UNREACHABLE => 0.0,
                            d => 1.0 / d as f64,
                        })
                        .sum::<f64>()
                })
                .sum::<f64>()
        })
        .collect();
    let total: f64 = per_source.iter().sum();
    total / (n as f64 * (n - 1) as f64)
}

pub fn global_efficiency(g: &Graph) -> f64 {
    global_efficiency_with_basis(g, Basis::Survivors)
}

/// Mean over nodes of the efficiency of the neighbor-induced subgraph.
///
/// For node i the subgraph G_i contains i's alive neighbors and the edges
/// among them (i itself excluded); its efficiency is the mean inverse
/// distance over ordered pairs measured inside G_i. Nodes with fewer than
/// two neighbors contribute 0: with at most one neighbor there is no local
/// alternative routing to measure.
pub fn local_efficiency_with_basis(g: &Graph, basis: Basis) -> f64 {
    let n = population(g, basis);
    if n == 0 {
        return 0.0;
    }
    let nodes: Vec<NodeId> = g.alive_nodes().collect();
    let per_node: Vec<f64> = nodes
        .par_chunks(64)
        .map(|chunk| {
            let mut local_index = vec![u32::MAX; g.node_count()];
            chunk
                .iter()
                .map(|&v| subgraph_efficiency(g, v, &mut local_index))
                .sum::<f64>()
        })
        .collect();
    let total: f64 = per_node.iter().sum();
    total / n as f64
}

pub fn local_efficiency(g: &Graph) -> f64 {
    local_efficiency_with_basis(g, Basis::Survivors)
}

/// Efficiency of the subgraph induced on v's neighbors. `local_index` is
/// caller-owned scratch (all u32::MAX between calls).
fn subgraph_efficiency(g: &Graph, v: NodeId, local_index: &mut [u32]) -> f64 {
    let members: Vec<NodeId> = g.neighbors(v).collect();
    let k = members.len();
    if k < 2 {
        return 0.0;
    }
    for (i, &m) in members.iter().enumerate() {
        local_index[m.index()] = i as u32;
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (i, &m) in members.iter().enumerate() {
        for w in g.neighbors(m) {
            let j = local_index[w.index()];
            if j != u32::MAX && j as usize != i {
                adj[i].push(j);
            }
        }
    }
    // All-pairs BFS inside the small subgraph.
    let mut inv_sum = 0.0f64;
    let mut dist = vec![UNREACHABLE; k];
    let mut queue: Vec<u32> = Vec::with_capacity(k);
    for s in 0..k {
        dist[..].fill(UNREACHABLE);
        queue.clear();
        dist[s] = 0;
        queue.push(s as u32);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for &w in &adj[u] {
                if dist[w as usize] == UNREACHABLE {
                    dist[w as usize] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            if t != s && d != UNREACHABLE {
                inv_sum += 1.0 / d as f64;
            }
        }
    }
    for &m in &members {
        local_index[m.index()] = u32::MAX;
    }
    inv_sum / (k as f64 * (k - 1) as f64)
}

/// Size of the largest connected component among alive nodes; 0 when empty.
pub fn giant_component_size(g: &Graph) -> usize {
    g.connected_components().first().map_or(0, Vec::len)
}

/// True iff the alive nodes form at most one connected component. Graphs
/// with one or zero alive nodes count as connected (vacuously).
pub fn is_connected(g: &Graph) -> bool {
    g.alive_count() <= 1 || g.connected_components().len() == 1
}

/// Compute the full measurement bundle in one pass.
pub fn metrics_vector(g: &Graph, basis: Basis) -> MetricsVector {
    let comps = g.connected_components();
    let giant = comps.first().map_or(0, Vec::len);
    let n_alive = g.alive_count();
    let betweenness_max = g
        .betweenness()
        .into_iter()
        .fold(0.0f64, |acc, b| if b > acc { b } else { acc });
    MetricsVector {
        connected: n_alive <= 1 || comps.len() == 1,
        cost: cost_with_basis(g, basis),
        e_glob: global_efficiency_with_basis(g, basis),
        e_loc: local_efficiency_with_basis(g, basis),
        giant,
        n_alive,
        betweenness_max,
    }
}
