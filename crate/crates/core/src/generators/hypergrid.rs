//! Hypergrid: growth with a hard per-node degree cap.
//!
//! Arrivals attach to the earliest node (in BFS order from the root) still
//! under the cap; for this growth rule BFS order coincides with arrival
//! order, so a scan pointer implements it exactly. Random extra edges among
//! under-cap nodes then fill the edge budget n·k/2, or stop when no legal
//! pair remains.

use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{EdgeInsert, Graph, NodeId};

/// Consecutive rejected samples before falling back to an exhaustive scan
/// for a legal pair.
const SAMPLE_PATIENCE: usize = 256;

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let n = spec.n;
    let kbar = spec.mean_degree_target;
    let cap = spec
        .params
        .hypergrid_max_degree
        .unwrap_or((kbar.round() as usize) + 2);
    if cap < 2 {
        return Err(GenerateError::InvalidSpec(format!(
            "hypergrid max_degree must be at least 2, got {cap}"
        )));
    }
    if (cap as f64) < kbar {
        return Err(GenerateError::InvalidSpec(format!(
            "hypergrid max_degree {cap} cannot reach mean degree {kbar}"
        )));
    }

    let mut g = Graph::with_nodes(n);
    // Tree phase. A node under the cap always exists among the first v
    // arrivals (degree sum 2(v-1) < v*cap for cap >= 2), so the pointer
    // never catches up with v.
    let mut parent = 0u32;
    for v in 1..n as u32 {
        while g.degree(NodeId(parent)) >= cap {
            parent += 1;
        }
        g.add_edge(NodeId(v), NodeId(parent)).expect("fresh edge");
    }

    // Fill phase: random edges between under-cap, non-adjacent pairs.
    let budget = (n as f64 * kbar / 2.0).round() as usize;
    let mut under: Vec<u32> = (0..n as u32)
        .filter(|&v| g.degree(NodeId(v)) < cap)
        .collect();
    let mut failures = 0usize;
    while g.edge_count() < budget {
        if under.len() < 2 {
            break;
        }
        let i = rng.random_range(0..under.len());
        if g.degree(NodeId(under[i])) >= cap {
            under.swap_remove(i);
            continue;
        }
        let j = rng.random_range(0..under.len());
        if i == j || g.degree(NodeId(under[j])) >= cap {
            failures += 1;
        } else if g.add_edge(NodeId(under[i]), NodeId(under[j])) == Ok(EdgeInsert::Added) {
            failures = 0;
            continue;
        } else {
            failures += 1;
        }
        if failures > SAMPLE_PATIENCE {
            failures = 0;
            under.retain(|&v| g.degree(NodeId(v)) < cap);
            let legal = legal_pairs(&g, &under, cap);
            if legal.is_empty() {
                break;
            }
            let (u, v) = legal[rng.random_range(0..legal.len())];
            g.add_edge(NodeId(u), NodeId(v)).expect("legal pair");
        }
    }
    if g.edge_count() < budget {
        log::warn!(
            "hypergrid edge budget unmet: {} of {budget} edges (cap {cap})",
            g.edge_count()
        );
    }
    Ok(g)
}

fn legal_pairs(g: &Graph, under: &[u32], cap: usize) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for (i, &u) in under.iter().enumerate() {
        if g.degree(NodeId(u)) >= cap {
            continue;
        }
        for &v in &under[i + 1..] {
            if g.degree(NodeId(v)) < cap && !g.has_edge(NodeId(u), NodeId(v)) {
                pairs.push((u.min(v), u.max(v)));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}
