//! Defensive reconnection, fired once per surviving neighbor of each removed
//! node. With probability 1-P the neighbor does nothing; otherwise it adds
//! one replacement edge chosen by the active strategy.
//!
//! Random reaches anywhere in the network and can re-bridge components.
//! Greedy and betweenness only reach second neighbors, which by definition
//! sit in the affected node's own component, so they never change the
//! component count.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attack::RemovalEvent;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewireStrategy {
    None,
    Random,
    Greedy,
    Betweenness,
}

impl RewireStrategy {
    pub fn name(self) -> &'static str {
        match self {
            RewireStrategy::None => "none",
            RewireStrategy::Random => "random",
            RewireStrategy::Greedy => "greedy",
            RewireStrategy::Betweenness => "betweenness",
        }
    }
}

impl std::str::FromStr for RewireStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(RewireStrategy::None),
            "random" => Ok(RewireStrategy::Random),
            "greedy" => Ok(RewireStrategy::Greedy),
            "betweenness" => Ok(RewireStrategy::Betweenness),
            other => Err(format!("unknown rewiring strategy '{other}'")),
        }
    }
}

impl std::fmt::Display for RewireStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Rewiring strategy plus the per-neighbor reaction probability P.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewirePolicy {
    pub strategy: RewireStrategy,
    pub probability: f64,
}

impl RewirePolicy {
    pub fn new(strategy: RewireStrategy, probability: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&probability),
            "rewiring probability {probability} out of range"
        );
        RewirePolicy {
            strategy,
            probability,
        }
    }

    pub fn none() -> Self {
        RewirePolicy {
            strategy: RewireStrategy::None,
            probability: 0.0,
        }
    }
}

/// Betweenness scores computed at most once per removal event; the scores
/// are taken from the graph as it stands when the first reacting neighbor
/// needs them.
#[derive(Default)]
struct EventScores(Option<Vec<f64>>);

impl EventScores {
    fn get(&mut self, g: &Graph) -> &[f64] {
        self.0.get_or_insert_with(|| g.betweenness())
    }
}

/// One neighbor's reaction. Returns the added edge, or `None` when the
/// probability roll fails or no candidate exists (an isolated survivor or
/// one without second neighbors cannot create a link).
pub fn react(
    g: &mut Graph,
    affected: NodeId,
    policy: &RewirePolicy,
    rng: &mut impl Rng,
) -> Option<(NodeId, NodeId)> {
    react_with_scores(g, affected, policy, rng, &mut EventScores::default())
}

fn react_with_scores(
    g: &mut Graph,
    affected: NodeId,
    policy: &RewirePolicy,
    rng: &mut impl Rng,
    scores: &mut EventScores,
) -> Option<(NodeId, NodeId)> {
    assert!(g.is_alive(affected), "affected node {affected} is dead");
    if policy.strategy == RewireStrategy::None {
        return None;
    }
    if !rng.random_bool(policy.probability) {
        return None;
    }
    let partner = match policy.strategy {
        RewireStrategy::None => unreachable!(),
        RewireStrategy::Random => random_partner(g, affected, rng),
        RewireStrategy::Greedy => best_second_neighbor(g, affected, |v| g.degree(v) as f64),
        RewireStrategy::Betweenness => {
            let scores = scores.get(g);
            best_second_neighbor(g, affected, |v| scores[v.index()])
        }
    }?;
    g.add_edge(affected, partner)
        .expect("candidates exclude self and existing neighbors");
    Some((affected, partner))
}

/// Uniform choice among alive nodes that are neither `affected` nor already
/// adjacent to it.
fn random_partner(g: &Graph, affected: NodeId, rng: &mut impl Rng) -> Option<NodeId> {
    let candidates: Vec<NodeId> = g
        .alive_nodes()
        .filter(|&v| v != affected && !g.has_edge(affected, v))
        .collect();
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.random_range(0..candidates.len())])
    }
}

/// Argmax over the second neighbors, ties to the lowest id. Any positive
/// rescaling of the score leaves the choice unchanged.
fn best_second_neighbor(
    g: &Graph,
    affected: NodeId,
    score: impl Fn(NodeId) -> f64,
) -> Option<NodeId> {
    let mut best: Option<(NodeId, f64)> = None;
    for v in g.second_neighbors(affected) {
        let s = score(v);
        match best {
            Some((_, bs)) if s <= bs => {}
            _ => best = Some((v, s)),
        }
    }
    best.map(|(v, _)| v)
}

/// Run [`react`] once per exposed neighbor of the event, in ascending id
/// order, and return every edge added. Betweenness scores are shared across
/// the event's reactions.
pub fn apply_event(
    g: &mut Graph,
    event: &RemovalEvent,
    policy: &RewirePolicy,
    rng: &mut impl Rng,
) -> Vec<(NodeId, NodeId)> {
    if policy.strategy == RewireStrategy::None {
        return Vec::new();
    }
    let mut scores = EventScores::default();
    let mut added = Vec::new();
    for &neighbor in &event.exposed_neighbors {
        if let Some(edge) = react_with_scores(g, neighbor, policy, rng, &mut scores) {
            added.push(edge);
        }
    }
    added
}
