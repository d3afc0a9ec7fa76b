//! Seeded Monte Carlo harness: generate a fresh overlay per trial, run the
//! attack with interleaved rewiring, measure the survivor graph once, and
//! aggregate across trials.
//!
//! Trial t of a campaign draws every random decision from ChaCha streams
//! seeded with base_seed + t (stream 0 generation, 1 victim selection,
//! 2 rewiring), so campaigns are reproducible bit-for-bit regardless of how
//! trials are scheduled, and rewiring cannot perturb the victim sequence of
//! non-recalculating attacks.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{self, AttackPlan};
use crate::generators::{self, GenerateError, TopologySpec};
use crate::metrics::{self, Basis, MetricsVector};
use crate::rewiring::RewirePolicy;

pub const DEFAULT_TRIALS: usize = 10;

const STREAM_GENERATE: u64 = 0;
const STREAM_ATTACK: u64 = 1;
const STREAM_REWIRE: u64 = 2;

/// Everything one campaign needs: what to build, how to break it, how it
/// defends, and how many seeded repetitions to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub topology: TopologySpec,
    pub plan: AttackPlan,
    pub policy: RewirePolicy,
    pub trials: usize,
    pub base_seed: u64,
    /// Debug aid: record the full metric vector after every removal.
    /// Expensive; not part of the measurement protocol.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub record_trajectory: bool,
}

impl ExperimentConfig {
    pub fn new(topology: TopologySpec, plan: AttackPlan, policy: RewirePolicy) -> Self {
        ExperimentConfig {
            topology,
            plan,
            policy,
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            record_trajectory: false,
        }
    }
}

/// Outcome of a single seeded trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub metrics: MetricsVector,
    pub removals: usize,
    pub rewired_edges: usize,
    pub truncated: bool,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<MetricsVector>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len();
    if n == 0 {
        return MeanStd { mean: 0.0, std: 0.0 };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return MeanStd { mean, std: 0.0 };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    MeanStd {
        mean,
        std: var.sqrt(),
    }
}

/// Monte Carlo aggregate over a campaign's completed trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub config: ExperimentConfig,
    pub trials_requested: usize,
    pub trials_completed: usize,
    pub generation_failures: usize,
    /// Share of completed trials whose survivor graph was disconnected.
    pub disconnection_probability: f64,
    pub cost: MeanStd,
    pub e_glob: MeanStd,
    pub e_loc: MeanStd,
    pub giant: MeanStd,
    pub mean_removals: f64,
    pub mean_rewired_edges: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrialError {
    #[error(transparent)]
    Generation(#[from] GenerateError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CampaignError {
    #[error("all {requested} trials failed generation: {cause}")]
    AllTrialsFailed { requested: usize, cause: String },
    #[error("campaign requested zero trials")]
    NoTrials,
}

pub fn trial_seed(base_seed: u64, trial_index: usize) -> u64 {
    base_seed.wrapping_add(trial_index as u64)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Run one trial: fresh graph, full attack with rewiring interleaved, then
/// one measurement pass over the survivors (the fault model is static, so
/// nothing fails during measurement).
pub fn run_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialReport, TrialError> {
    let seed = trial_seed(config.base_seed, trial_index);
    let start = Instant::now();
    let mut gen_rng = stream_rng(seed, STREAM_GENERATE);
    let mut graph = generators::generate_connected(&config.topology, &mut gen_rng)?;
    let mut attack_rng = stream_rng(seed, STREAM_ATTACK);
    let mut rewire_rng = stream_rng(seed, STREAM_REWIRE);

    let mut trajectory: Option<Vec<MetricsVector>> = config.record_trajectory.then(Vec::new);
    let outcome = match trajectory.as_mut() {
        Some(steps) => attack::run_attack_observed(
            &mut graph,
            &config.plan,
            &config.policy,
            &mut attack_rng,
            &mut rewire_rng,
            |g, _| steps.push(metrics::metrics_vector(g, Basis::Survivors)),
        ),
        None => attack::run_attack(
            &mut graph,
            &config.plan,
            &config.policy,
            &mut attack_rng,
            &mut rewire_rng,
        ),
    };
    let metrics = metrics::metrics_vector(&graph, Basis::Survivors);
    Ok(TrialReport {
        metrics,
        removals: outcome.steps.len(),
        rewired_edges: outcome.rewired_edge_count(),
        truncated: outcome.truncated,
        runtime_ms: start.elapsed().as_millis() as u64,
        trajectory,
    })
}

/// Run all trials of a campaign (in parallel where threads are available)
/// and aggregate. Trials that fail generation are excluded from every
/// statistic and reported in `generation_failures`.
pub fn run_campaign(config: &ExperimentConfig) -> Result<CampaignSummary, CampaignError> {
    if config.trials == 0 {
        return Err(CampaignError::NoTrials);
    }
    let results: Vec<Result<TrialReport, TrialError>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();

    let mut completed: Vec<TrialReport> = Vec::with_capacity(results.len());
    let mut last_error = None;
    for r in results {
        match r {
            Ok(report) => completed.push(report),
            Err(e) => last_error = Some(e),
        }
    }
    let generation_failures = config.trials - completed.len();
    if completed.is_empty() {
        return Err(CampaignError::AllTrialsFailed {
            requested: config.trials,
            cause: last_error.expect("no successes implies an error").to_string(),
        });
    }

    let disconnected = completed.iter().filter(|r| !r.metrics.connected).count();
    let collect = |f: fn(&TrialReport) -> f64| -> Vec<f64> { completed.iter().map(f).collect() };
    Ok(CampaignSummary {
        config: config.clone(),
        trials_requested: config.trials,
        trials_completed: completed.len(),
        generation_failures,
        disconnection_probability: disconnected as f64 / completed.len() as f64,
        cost: mean_std(&collect(|r| r.metrics.cost)),
        e_glob: mean_std(&collect(|r| r.metrics.e_glob)),
        e_loc: mean_std(&collect(|r| r.metrics.e_loc)),
        giant: mean_std(&collect(|r| r.metrics.giant as f64)),
        mean_removals: collect(|r| r.removals as f64).iter().sum::<f64>()
            / completed.len() as f64,
        mean_rewired_edges: collect(|r| r.rewired_edges as f64).iter().sum::<f64>()
            / completed.len() as f64,
    })
}

/// Run every campaign in the grid, preserving order; per-campaign errors
/// ride along inline and never abort the sweep.
pub fn run_sweep(grid: &[ExperimentConfig]) -> Vec<Result<CampaignSummary, CampaignError>> {
    run_sweep_with_progress(grid, |_, _| {})
}

/// [`run_sweep`] with a completion callback (index, outcome) for progress
/// reporting; callbacks may arrive out of order when campaigns run
/// concurrently.
pub fn run_sweep_with_progress(
    grid: &[ExperimentConfig],
    on_complete: impl Fn(usize, &Result<CampaignSummary, CampaignError>) + Sync,
) -> Vec<Result<CampaignSummary, CampaignError>> {
    grid.par_iter()
        .enumerate()
        .map(|(i, config)| {
            let result = run_campaign(config);
            on_complete(i, &result);
            result
        })
        .collect()
}
