//! CAN: a d-dimensional coordinate-space torus partitioned into zones.
//!
//! Each join picks a uniformly random point of the space and splits the
//! zone owning it in half, along a dimension cycled per zone (round-robin
//! on split depth). Point sampling weights zone choice by volume, which is
//! what keeps the partition balanced and the degrees tight. Neighbors are
//! zones that abut in exactly one dimension and overlap in all others, with
//! wraparound at the torus boundary. d defaults so that 2d tracks the
//! degree target.

use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{Graph, NodeId};

/// Coordinate span per dimension; power of two so halving stays exact.
const SPACE: u64 = 1 << 30;

struct Zone {
    lo: Vec<u64>,
    hi: Vec<u64>,
    depth: u32,
}

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let d = spec
        .params
        .can_dimensions
        .unwrap_or_else(|| ((spec.mean_degree_target / 2.0).round() as usize).max(1));
    if d == 0 || d > 32 {
        return Err(GenerateError::InvalidSpec(format!(
            "can dimensions must be in 1..=32, got {d}"
        )));
    }
    let n = spec.n;

    let mut zones: Vec<Zone> = Vec::with_capacity(n);
    zones.push(Zone {
        lo: vec![0; d],
        hi: vec![SPACE; d],
        depth: 0,
    });
    // Zone i is owned by node i; each join splits the zone that owns a
    // uniformly random point.
    let mut point = vec![0u64; d];
    while zones.len() < n {
        for coord in point.iter_mut() {
            *coord = rng.random_range(0..SPACE);
        }
        let zi = zones
            .iter()
            .position(|z| (0..d).all(|k| z.lo[k] <= point[k] && point[k] < z.hi[k]))
            .expect("zones partition the space");
        let dim = {
            let z = &zones[zi];
            (0..d)
                .map(|off| (z.depth as usize + off) % d)
                .find(|&dim| z.hi[dim] - z.lo[dim] >= 2)
        };
        // A zone of unit volume in every dimension cannot split; with a
        // 2^30 span that needs more zones than this simulator ever builds.
        let Some(dim) = dim else {
            return Err(GenerateError::InvalidSpec(
                "can coordinate space exhausted".into(),
            ));
        };
        let mid = (zones[zi].lo[dim] + zones[zi].hi[dim]) / 2;
        let mut upper = Zone {
            lo: zones[zi].lo.clone(),
            hi: zones[zi].hi.clone(),
            depth: zones[zi].depth + 1,
        };
        upper.lo[dim] = mid;
        zones[zi].hi[dim] = mid;
        zones[zi].depth += 1;
        zones.push(upper);
    }

    let mut g = Graph::with_nodes(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if adjacent(&zones[i], &zones[j], d) {
                g.add_edge(NodeId(i as u32), NodeId(j as u32))
                    .expect("distinct zones");
            }
        }
    }
    Ok(g)
}

/// Zones touch iff they abut in exactly one dimension (directly or across
/// the torus wrap) and strictly overlap in every other dimension.
fn adjacent(a: &Zone, b: &Zone, d: usize) -> bool {
    let mut abutting = 0;
    for k in 0..d {
        if a.lo[k] < b.hi[k] && b.lo[k] < a.hi[k] {
            continue; // overlap
        }
        let touches = a.hi[k] == b.lo[k]
            || b.hi[k] == a.lo[k]
            || (a.hi[k] == SPACE && b.lo[k] == 0)
            || (b.hi[k] == SPACE && a.lo[k] == 0);
        if !touches {
            return false;
        }
        abutting += 1;
        if abutting > 1 {
            return false; // corner contact only
        }
    }
    abutting == 1
}
