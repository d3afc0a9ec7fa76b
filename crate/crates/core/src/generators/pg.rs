//! The (p, g) grown hybrid: each arrival attaches m = round(k/2) edges, and
//! each endpoint is drawn uniformly with probability g or preferentially
//! with weight degree^p otherwise. (1, 0) is pure preferential growth, the
//! default operating point.

use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{Graph, NodeId};

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let n = spec.n;
    let p = spec.params.pg_p.unwrap_or(1.0);
    let g_share = spec.params.pg_g.unwrap_or(0.0);
    if !(0.0..=1.0).contains(&g_share) {
        return Err(GenerateError::InvalidSpec(format!(
            "pg g must be in [0, 1], got {g_share}"
        )));
    }
    if p.is_nan() || p < 0.0 {
        return Err(GenerateError::InvalidSpec(format!(
            "pg p must be non-negative, got {p}"
        )));
    }
    let m = ((spec.mean_degree_target / 2.0).round() as usize).max(1);
    if m + 1 > n {
        return Err(GenerateError::InvalidSpec(format!(
            "pg needs at least m+1 = {} nodes, got {n}",
            m + 1
        )));
    }

    let mut graph = Graph::with_nodes(n);
    // Seed clique keeps every weight positive from the first join.
    for u in 0..=m as u32 {
        for v in (u + 1)..=m as u32 {
            graph.add_edge(NodeId(u), NodeId(v)).expect("seed clique");
        }
    }

    let mut weights: Vec<f64> = Vec::with_capacity(n);
    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    for joiner in (m + 1)..n {
        // Degrees are frozen while one arrival selects its m endpoints.
        weights.clear();
        weights.extend((0..joiner).map(|v| {
            let d = graph.degree(NodeId(v as u32)) as f64;
            if p == 1.0 {
                d
            } else {
                d.powf(p)
            }
        }));
        let total: f64 = weights.iter().sum();
        chosen.clear();
        let mut attempts = 0usize;
        while chosen.len() < m && attempts < 64 * m {
            attempts += 1;
            let candidate = if g_share > 0.0 && rng.random_bool(g_share) {
                rng.random_range(0..joiner) as u32
            } else {
                weighted_pick(&weights, total, rng)
            };
            if !chosen.contains(&candidate) {
                chosen.push(candidate);
            }
        }
        // Degenerate weight concentrations can starve the sampler; finish
        // deterministically from the lowest unchosen ids.
        let mut fill = 0u32;
        while chosen.len() < m {
            if !chosen.contains(&fill) {
                chosen.push(fill);
            }
            fill += 1;
        }
        for &t in &chosen {
            graph
                .add_edge(NodeId(joiner as u32), NodeId(t))
                .expect("distinct targets");
        }
    }
    Ok(graph)
}

fn weighted_pick(weights: &[f64], total: f64, rng: &mut impl Rng) -> u32 {
    let mut r = rng.random::<f64>() * total;
    for (v, &w) in weights.iter().enumerate() {
        r -= w;
        if r <= 0.0 {
            return v as u32;
        }
    }
    (weights.len() - 1) as u32
}
