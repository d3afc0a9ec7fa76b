//! PRU: a cache-based join protocol. A bootstrap cohort fills a host cache;
//! every later arrival connects to `links_per_join` nodes drawn from
//! distinct cache slots, and a slot occupant that has served its quota is
//! replaced by a random node not currently cached.
//!
//! Serving concentrates degree on (mostly early) cache occupants, which is
//! what gives this overlay its low diameter and its hubs, while plain
//! joiners keep exactly `links_per_join` edges. The cohort is wired in a
//! ring so the cache is connected before it has served anyone.
//!
//! Defaults are tuned around the mean-degree identity
//! cohort + links·(n - cohort) = n·k/2: `links_per_join = ceil(k/2) + 4` and
//! `cache_size = n(links - k/2)/(links - 1)`.

use rand::Rng;

use super::{GenerateError, TopologySpec};
use crate::graph::{Graph, NodeId};

const DEFAULT_QUOTA: usize = 40;

pub(super) fn build(spec: &TopologySpec, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    let n = spec.n;
    let kbar = spec.mean_degree_target;
    let links = spec
        .params
        .pru_links_per_join
        .unwrap_or(((kbar / 2.0).ceil() as usize) + 4);
    if links < 1 {
        return Err(GenerateError::InvalidSpec(
            "pru links_per_join must be at least 1".into(),
        ));
    }
    if (links as f64) <= kbar / 2.0 {
        return Err(GenerateError::InvalidSpec(format!(
            "pru links_per_join {links} cannot reach mean degree {kbar}"
        )));
    }
    let cache_size = spec.params.pru_cache_size.unwrap_or_else(|| {
        (n as f64 * (links as f64 - kbar / 2.0) / (links as f64 - 1.0)).round() as usize
    });
    if cache_size < links || cache_size >= n {
        return Err(GenerateError::InvalidSpec(format!(
            "pru cache_size {cache_size} must be in {links}..{n}"
        )));
    }
    let quota = spec.params.pru_quota.unwrap_or(DEFAULT_QUOTA);
    if quota == 0 {
        return Err(GenerateError::InvalidSpec(
            "pru quota must be positive".into(),
        ));
    }

    let mut g = Graph::with_nodes(n);
    for i in 0..cache_size as u32 {
        let next = (i + 1) % cache_size as u32;
        if next != i {
            g.add_edge(NodeId(i), NodeId(next)).ok();
        }
    }

    let mut cache: Vec<u32> = (0..cache_size as u32).collect();
    let mut served = vec![0usize; cache_size];
    let mut in_cache = vec![false; n];
    for &v in &cache {
        in_cache[v as usize] = true;
    }

    for joiner in cache_size as u32..n as u32 {
        let mut slots: Vec<usize> = rand::seq::index::sample(rng, cache_size, links).into_vec();
        slots.sort_unstable();
        for &s in &slots {
            g.add_edge(NodeId(joiner), NodeId(cache[s]))
                .expect("joiner is new, occupants distinct");
            served[s] += 1;
        }
        for &s in &slots {
            if served[s] >= quota {
                // Replace the exhausted occupant with a random node not
                // currently cached (the joiner itself is eligible).
                let replacement = loop {
                    let cand = rng.random_range(0..=joiner);
                    if !in_cache[cand as usize] {
                        break cand;
                    }
                };
                in_cache[cache[s] as usize] = false;
                in_cache[replacement as usize] = true;
                cache[s] = replacement;
                served[s] = 0;
            }
        }
    }
    Ok(g)
}
