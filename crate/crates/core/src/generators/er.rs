//! Erdős–Rényi G(n, p) with p = mean_degree_target / (n - 1).

use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{Graph, NodeId};

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let n = spec.n;
    let p = spec.mean_degree_target / (n - 1) as f64;
    let mut g = Graph::with_nodes(n);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.random_bool(p) {
                g.add_edge(NodeId(u), NodeId(v)).expect("fresh pair");
            }
        }
    }
    Ok(g)
}
