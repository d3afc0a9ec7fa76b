//! Victim selection and the removal loop for the six attack strategies.
//!
//! ID/IB freeze a ranking on the pristine graph (initial degree / initial
//! betweenness) and walk it, skipping the dead. RD/RB recompute their score
//! on the current graph at every step. The incomplete-information attack
//! mixes the recalculated-degree choice (probability `info`) with a uniform
//! one, so info = 0 degenerates to the random attack and info = 1 to
//! RD-removal.

use std::io::{self, BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::rewiring::{self, RewirePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttackStrategy {
    Random,
    #[serde(rename = "id")]
    IdRemoval,
    #[serde(rename = "ib")]
    IbRemoval,
    #[serde(rename = "rd")]
    RdRemoval,
    #[serde(rename = "rb")]
    RbRemoval,
    Incomplete {
        /// Attack information: 0 is blind (random), 1 is fully informed.
        info: f64,
    },
}

impl AttackStrategy {
    pub fn name(self) -> &'static str {
        match self {
            AttackStrategy::Random => "random",
            AttackStrategy::IdRemoval => "id",
            AttackStrategy::IbRemoval => "ib",
            AttackStrategy::RdRemoval => "rd",
            AttackStrategy::RbRemoval => "rb",
            AttackStrategy::Incomplete { .. } => "incomplete",
        }
    }

    pub fn info(self) -> Option<f64> {
        match self {
            AttackStrategy::Incomplete { info } => Some(info),
            _ => None,
        }
    }
}

impl std::fmt::Display for AttackStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AttackStrategy::Incomplete { info } => write!(f, "incomplete({info})"),
            other => f.write_str(other.name()),
        }
    }
}

/// An attack strategy plus the static failure rate P_f it is run at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackPlan {
    pub strategy: AttackStrategy,
    pub failure_rate: f64,
}

impl AttackPlan {
    pub fn new(strategy: AttackStrategy, failure_rate: f64) -> Self {
        AttackPlan {
            strategy,
            failure_rate,
        }
    }
}

/// Deterministic removal budget: ceil(p_f * n), computed so that values a
/// hair under an integer (float artifacts of p_f like 0.1) round instead of
/// ceiling up.
pub fn target_count(n: usize, p_f: f64) -> usize {
    assert!((0.0..=1.0).contains(&p_f), "failure rate {p_f} out of range");
    let x = p_f * n as f64;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// One removal: who died, when, and which alive neighbors it exposed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalEvent {
    pub step: usize,
    pub victim: NodeId,
    pub exposed_neighbors: Vec<NodeId>,
}

/// A removal event together with the edges rewiring added in reaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(flatten)]
    pub removal: RemovalEvent,
    pub added_edges: Vec<(NodeId, NodeId)>,
}

/// Full log of an attack run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttackOutcome {
    pub steps: Vec<StepRecord>,
    /// True when the alive population ran out before the budget did.
    pub truncated: bool,
}

impl AttackOutcome {
    pub fn rewired_edge_count(&self) -> usize {
        self.steps.iter().map(|s| s.added_edges.len()).sum()
    }

    /// One JSON object per step, newline separated.
    pub fn write_jsonl<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for step in &self.steps {
            serde_json::to_writer(&mut *w, step)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> io::Result<Vec<StepRecord>> {
        r.lines()
            .map(|line| {
                let line = line?;
                serde_json::from_str(&line).map_err(io::Error::other)
            })
            .collect()
    }
}

/// Alive nodes ranked by pristine degree, descending, ties to the lowest id.
pub fn initial_degree_ranking(g: &Graph) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = g.alive_nodes().collect();
    nodes.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    nodes
}

/// Alive nodes ranked by pristine betweenness, descending, ties to the
/// lowest id.
pub fn initial_betweenness_ranking(g: &Graph) -> Vec<NodeId> {
    let scores = g.betweenness();
    let mut nodes: Vec<NodeId> = g.alive_nodes().collect();
    nodes.sort_by(|&a, &b| {
        scores[b.index()]
            .partial_cmp(&scores[a.index()])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    nodes
}

fn ranking_for(g: &Graph, strategy: AttackStrategy) -> Vec<NodeId> {
    match strategy {
        AttackStrategy::IdRemoval => initial_degree_ranking(g),
        AttackStrategy::IbRemoval => initial_betweenness_ranking(g),
        _ => Vec::new(),
    }
}

fn uniform_alive(g: &Graph, rng: &mut impl Rng) -> Option<NodeId> {
    let alive: Vec<NodeId> = g.alive_nodes().collect();
    if alive.is_empty() {
        None
    } else {
        Some(alive[rng.random_range(0..alive.len())])
    }
}

fn argmax_alive(g: &Graph, score: impl Fn(NodeId) -> f64) -> Option<NodeId> {
    let mut best: Option<(NodeId, f64)> = None;
    for v in g.alive_nodes() {
        let s = score(v);
        match best {
            Some((_, bs)) if s <= bs => {}
            _ => best = Some((v, s)),
        }
    }
    best.map(|(v, _)| v)
}

fn max_current_degree(g: &Graph) -> Option<NodeId> {
    argmax_alive(g, |v| g.degree(v) as f64)
}

/// Select the next victim under `plan`. `initial_ranking` is the frozen
/// ranking for ID/IB strategies (ignored by the rest); ties everywhere
/// break toward the lowest id.
pub fn next_victim(
    g: &Graph,
    plan: &AttackPlan,
    initial_ranking: &[NodeId],
    rng: &mut impl Rng,
) -> Option<NodeId> {
    match plan.strategy {
        AttackStrategy::Random => uniform_alive(g, rng),
        AttackStrategy::IdRemoval | AttackStrategy::IbRemoval => {
            initial_ranking.iter().copied().find(|&v| g.is_alive(v))
        }
        AttackStrategy::RdRemoval => max_current_degree(g),
        AttackStrategy::RbRemoval => {
            let scores = g.betweenness();
            argmax_alive(g, |v| scores[v.index()])
        }
        AttackStrategy::Incomplete { info } => {
            if rng.random_bool(info) {
                max_current_degree(g)
            } else {
                uniform_alive(g, rng)
            }
        }
    }
}

/// Run the full removal sequence, invoking the rewiring hook after every
/// removal (so recalculating strategies see rewired edges when they pick
/// the next victim). Victim selection and rewiring draw from separate rng
/// streams, which keeps the victim sequence of non-recalculating attacks
/// identical across rewiring policies under one seed.
pub fn run_attack(
    g: &mut Graph,
    plan: &AttackPlan,
    policy: &RewirePolicy,
    attack_rng: &mut impl Rng,
    rewire_rng: &mut impl Rng,
) -> AttackOutcome {
    run_attack_observed(g, plan, policy, attack_rng, rewire_rng, |_, _| {})
}

/// [`run_attack`] with a per-step observer (per-step metric trajectories in
/// the engine hang off this).
pub fn run_attack_observed(
    g: &mut Graph,
    plan: &AttackPlan,
    policy: &RewirePolicy,
    attack_rng: &mut impl Rng,
    rewire_rng: &mut impl Rng,
    mut observer: impl FnMut(&Graph, &StepRecord),
) -> AttackOutcome {
    if let AttackStrategy::Incomplete { info } = plan.strategy {
        assert!((0.0..=1.0).contains(&info), "attack information {info} out of range");
    }
    let budget = target_count(g.alive_count(), plan.failure_rate);
    let ranking = ranking_for(g, plan.strategy);
    let mut outcome = AttackOutcome {
        steps: Vec::with_capacity(budget),
        truncated: false,
    };
    for step in 0..budget {
        let Some(victim) = next_victim(g, plan, &ranking, attack_rng) else {
            outcome.truncated = true;
            break;
        };
        let exposed = g.remove_node(victim).expect("victim selected among alive");
        let event = RemovalEvent {
            step,
            victim,
            exposed_neighbors: exposed,
        };
        let added = rewiring::apply_event(g, &event, policy, rewire_rng);
        let record = StepRecord {
            removal: event,
            added_edges: added,
        };
        observer(g, &record);
        outcome.steps.push(record);
    }
    #[cfg(debug_assertions)]
    g.check_invariants();
    outcome
}
