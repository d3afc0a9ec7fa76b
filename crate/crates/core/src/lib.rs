//! Monte Carlo robustness lab for P2P overlay topologies.
//!
//! The crate builds overlay graphs (CAN, Chord, Hypergrid, PRU, Erdős–Rényi,
//! and a grown (p, g) hybrid), subjects them to static random failures and
//! targeted attacks with optional rewiring defenses, and measures what is
//! left: disconnection, cost, global/local efficiency, and the giant
//! component.
//!
//! Modules mirror the pipeline: [`graph`] storage and primitives,
//! [`generators`] topology construction, [`attack`] victim selection and
//! removal, [`rewiring`] per-event defenses, [`metrics`] the survivor
//! measures, and [`engine`] the seeded Monte Carlo harness tying them
//! together.

pub mod attack;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod rewiring;

pub use attack::{AttackOutcome, AttackPlan, AttackStrategy, RemovalEvent};
pub use engine::{CampaignSummary, ExperimentConfig, TrialReport};
pub use generators::{TopologyKind, TopologyParams, TopologySpec};
pub use graph::{Graph, NodeId};
pub use metrics::MetricsVector;
pub use rewiring::{RewirePolicy, RewireStrategy};
