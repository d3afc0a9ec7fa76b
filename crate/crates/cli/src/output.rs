//! Flat result records and their CSV/JSON encodings. Floats are written in
//! shortest round-trip form, so parse(emit(x)) preserves every numeric field
//! exactly and identical runs produce byte-identical files.

use std::io::{Read, Write};

use overlay_siege_core::engine::CampaignSummary;
use serde::{Deserialize, Serialize};

use crate::manifest::OutputFormat;

/// One campaign, flattened to the fixed output schema. Column order is the
/// field order below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub topology: String,
    pub n: usize,
    pub mean_degree: f64,
    pub attack: String,
    /// Information parameter; present only for the incomplete attack.
    pub a: Option<f64>,
    pub p_f: f64,
    pub rewiring: String,
    pub rewire_p: f64,
    /// Completed trials (the denominator behind every statistic).
    pub trials: usize,
    pub disconnection_prob: f64,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub eglob_mean: f64,
    pub eglob_std: f64,
    pub eloc_mean: f64,
    pub eloc_std: f64,
    pub giant_mean: f64,
    pub giant_std: f64,
    pub seed: u64,
}

impl From<&CampaignSummary> for SummaryRecord {
    fn from(s: &CampaignSummary) -> Self {
        SummaryRecord {
            topology: s.config.topology.kind.name().to_string(),
            n: s.config.topology.n,
            mean_degree: s.config.topology.mean_degree_target,
            attack: s.config.plan.strategy.name().to_string(),
            a: s.config.plan.strategy.info(),
            p_f: s.config.plan.failure_rate,
            rewiring: s.config.policy.strategy.name().to_string(),
            rewire_p: s.config.policy.probability,
            trials: s.trials_completed,
            disconnection_prob: s.disconnection_probability,
            cost_mean: s.cost.mean,
            cost_std: s.cost.std,
            eglob_mean: s.e_glob.mean,
            eglob_std: s.e_glob.std,
            eloc_mean: s.e_loc.mean,
            eloc_std: s.e_loc.std,
            giant_mean: s.giant.mean,
            giant_std: s.giant.std,
            seed: s.config.base_seed,
        }
    }
}

pub fn write_csv<W: Write>(records: &[SummaryRecord], w: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> csv::Result<Vec<SummaryRecord>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

pub fn write_json<W: Write>(records: &[SummaryRecord], w: &mut W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(&mut *w, records)?;
    let _ = writeln!(w);
    Ok(())
}

pub fn read_json<R: Read>(r: R) -> serde_json::Result<Vec<SummaryRecord>> {
    serde_json::from_reader(r)
}

/// Emit campaign summaries in the requested format.
pub fn emit<W: Write>(
    summaries: &[CampaignSummary],
    format: OutputFormat,
    w: &mut W,
) -> std::io::Result<()> {
    let records: Vec<SummaryRecord> = summaries.iter().map(SummaryRecord::from).collect();
    match format {
        OutputFormat::Csv => write_csv(&records, &mut *w).map_err(std::io::Error::other),
        OutputFormat::Json => write_json(&records, w).map_err(std::io::Error::other),
    }
}
