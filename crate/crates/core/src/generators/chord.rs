//! Chord identifier ring: nodes at distinct random ids in a 2^id_bits space,
//! undirected edges to the ring successor and to the successor of each
//! finger target id + 2^j, j = 1..id_bits-1. Duplicate fingers collapse.
//!
//! With n below a full power of two, fingers resolve to the successor of the
//! target id, which is standard Chord semantics under partial occupancy.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{Graph, NodeId};

/// Keeps the id table allocation bounded; 2^22 ids is far beyond any n this
/// simulator runs at.
const MAX_ID_BITS: u32 = 22;

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let n = spec.n;
    let bits = spec
        .params
        .chord_id_bits
        .unwrap_or_else(|| (n.next_power_of_two() as u64).trailing_zeros());
    if bits == 0 || bits > MAX_ID_BITS {
        return Err(GenerateError::InvalidSpec(format!(
            "chord id_bits must be in 1..={MAX_ID_BITS}, got {bits}"
        )));
    }
    let space = 1u64 << bits;
    if (space as usize) < n {
        return Err(GenerateError::InvalidSpec(format!(
            "chord id space 2^{bits} cannot hold {n} distinct ids"
        )));
    }

    // Distinct ids for the n nodes; node labels stay uncorrelated with ring
    // position.
    let mut pool: Vec<u64> = (0..space).collect();
    let (chosen, _) = pool.partial_shuffle(rng, n);
    let ids: Vec<u64> = chosen.to_vec();

    // Ring order: (id, node) sorted by id.
    let mut ring: Vec<(u64, u32)> = ids
        .iter()
        .enumerate()
        .map(|(v, &id)| (id, v as u32))
        .collect();
    ring.sort_unstable();

    let successor = |target: u64| -> u32 {
        match ring.binary_search_by(|&(id, _)| id.cmp(&target)) {
            Ok(i) => ring[i].1,
            Err(i) if i < ring.len() => ring[i].1,
            Err(_) => ring[0].1,
        }
    };

    let mut g = Graph::with_nodes(n);
    for (i, &(id, v)) in ring.iter().enumerate() {
        let succ = ring[(i + 1) % n].1;
        if succ != v {
            g.add_edge(NodeId(v), NodeId(succ)).expect("distinct ring nodes");
        }
        for j in 1..bits {
            let target = (id + (1u64 << j)) % space;
            let finger = successor(target);
            if finger != v {
                g.add_edge(NodeId(v), NodeId(finger)).expect("alive nodes");
            }
        }
    }
    Ok(g)
}
