//! Experiment manifests: a flat `key = value` format with one `experiment`
//! block per campaign, plus named presets that expand to full grids.
//!
//! Grammar (line oriented):
//!   - blank lines and `#` comments are ignored; `#` also starts an inline
//!     comment after a value
//!   - keys before the first block set defaults: `n`, `mean_degree`,
//!     `trials`, `seed`, `out`, `format`, `preset`
//!   - a line consisting of the word `experiment` opens a block; the keys
//!     `topology`, `attack`, `a`, `p_f`, `rewiring`, `p` describe it, and
//!     `n`, `mean_degree`, `trials`, `seed` plus the generator knobs
//!     (`can_dimensions`, `chord_id_bits`, `hypergrid_max_degree`,
//!     `pru_cache_size`, `pru_links_per_join`, `pru_quota`, `pg_p`, `pg_g`)
//!     override the defaults per experiment
//!   - `preset` and explicit experiment blocks are mutually exclusive

use std::path::PathBuf;
use std::str::FromStr;

use overlay_siege_core::attack::{AttackPlan, AttackStrategy};
use overlay_siege_core::engine::ExperimentConfig;
use overlay_siege_core::generators::{TopologyKind, TopologySpec};
use overlay_siege_core::rewiring::{RewirePolicy, RewireStrategy};
use thiserror::Error;

/// Failure-rate envelope enforced on manifests unless explicitly extended.
pub const STANDARD_MAX_FAILURE_RATE: f64 = 0.8;

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Fallbacks applied to experiments that do not set their own scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifestDefaults {
    pub n: usize,
    pub mean_degree: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ManifestDefaults {
    fn default() -> Self {
        ManifestDefaults {
            n: 2000,
            mean_degree: 18.0,
            trials: 10,
            seed: 42,
        }
    }
}

/// A parsed, validated batch of experiments plus output disposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub experiments: Vec<ExperimentConfig>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub figure_preset: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}", diagnostics.join("\n"))]
pub struct ManifestError {
    pub diagnostics: Vec<String>,
}

struct Draft {
    line: usize,
    topology: Option<(usize, String)>,
    attack: Option<(usize, String)>,
    a: Option<(usize, f64)>,
    p_f: Option<(usize, f64)>,
    rewiring: Option<(usize, String)>,
    p: Option<(usize, f64)>,
    n: Option<usize>,
    mean_degree: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    can_dimensions: Option<usize>,
    chord_id_bits: Option<u32>,
    hypergrid_max_degree: Option<usize>,
    pru_cache_size: Option<usize>,
    pru_links_per_join: Option<usize>,
    pru_quota: Option<usize>,
    pg_p: Option<f64>,
    pg_g: Option<f64>,
}

impl Draft {
    fn new(line: usize) -> Self {
        Draft {
            line,
            topology: None,
            attack: None,
            a: None,
            p_f: None,
            rewiring: None,
            p: None,
            n: None,
            mean_degree: None,
            trials: None,
            seed: None,
            can_dimensions: None,
            chord_id_bits: None,
            hypergrid_max_degree: None,
            pru_cache_size: None,
            pru_links_per_join: None,
            pru_quota: None,
            pg_p: None,
            pg_g: None,
        }
    }
}

struct Parser<'a> {
    defaults: ManifestDefaults,
    allow_extended: bool,
    diagnostics: Vec<String>,
    output_path: Option<PathBuf>,
    format: OutputFormat,
    preset: Option<(usize, String)>,
    drafts: Vec<Draft>,
    current: Option<Draft>,
    source: &'a str,
}

impl<'a> Parser<'a> {
    fn diag(&mut self, line: usize, message: impl AsRef<str>) {
        self.diagnostics
            .push(format!("line {line}: {}", message.as_ref()));
    }

    fn parse_value<T: FromStr>(&mut self, line: usize, key: &str, value: &str) -> Option<T> {
        match value.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.diag(line, format!("invalid value '{value}' for {key}"));
                None
            }
        }
    }

    fn global_key(&mut self, line: usize, key: &str, value: &str) {
        match key {
            "n" => {
                if let Some(v) = self.parse_value(line, key, value) {
                    self.defaults.n = v;
                }
            }
            "mean_degree" => {
                if let Some(v) = self.parse_value(line, key, value) {
                    self.defaults.mean_degree = v;
                }
            }
            "trials" => {
                if let Some(v) = self.parse_value(line, key, value) {
                    self.defaults.trials = v;
                }
            }
            "seed" => {
                if let Some(v) = self.parse_value(line, key, value) {
                    self.defaults.seed = v;
                }
            }
            "out" => self.output_path = Some(PathBuf::from(value)),
            "format" => match value.parse::<OutputFormat>() {
                Ok(f) => self.format = f,
                Err(e) => self.diag(line, e),
            },
            "preset" => self.preset = Some((line, value.to_string())),
            other => self.diag(line, format!("unknown global key '{other}'")),
        }
    }

    fn block_key(&mut self, line: usize, key: &str, value: &str) {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = self.parse_value(line, key, value) {
                    if let Some(d) = self.current.as_mut() {
                        d.$field = Some(v);
                    }
                }
            };
            ($field:ident, tagged) => {
                if let Some(v) = self.parse_value(line, key, value) {
                    if let Some(d) = self.current.as_mut() {
                        d.$field = Some((line, v));
                    }
                }
            };
        }
        match key {
            "topology" => {
                if let Some(d) = self.current.as_mut() {
                    d.topology = Some((line, value.to_string()));
                }
            }
            "attack" => {
                if let Some(d) = self.current.as_mut() {
                    d.attack = Some((line, value.to_string()));
                }
            }
            "rewiring" => {
                if let Some(d) = self.current.as_mut() {
                    d.rewiring = Some((line, value.to_string()));
                }
            }
            "a" => set!(a, tagged),
            "p_f" => set!(p_f, tagged),
            "p" => set!(p, tagged),
            "n" => set!(n),
            "mean_degree" => set!(mean_degree),
            "trials" => set!(trials),
            "seed" => set!(seed),
            "can_dimensions" => set!(can_dimensions),
            "chord_id_bits" => set!(chord_id_bits),
            "hypergrid_max_degree" => set!(hypergrid_max_degree),
            "pru_cache_size" => set!(pru_cache_size),
            "pru_links_per_join" => set!(pru_links_per_join),
            "pru_quota" => set!(pru_quota),
            "pg_p" => set!(pg_p),
            "pg_g" => set!(pg_g),
            other => self.diag(line, format!("unknown experiment key '{other}'")),
        }
    }

    fn run(mut self) -> Result<RunManifest, ManifestError> {
        for (idx, raw) in self.source.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            if text == "experiment" {
                if let Some(done) = self.current.take() {
                    self.drafts.push(done);
                }
                self.current = Some(Draft::new(line));
                continue;
            }
            let Some((key, value)) = text.split_once('=') else {
                self.diag(line, format!("expected 'key = value', got '{text}'"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                self.diag(line, format!("empty value for '{key}'"));
                continue;
            }
            if self.current.is_some() {
                self.block_key(line, key, value);
            } else {
                self.global_key(line, key, value);
            }
        }
        if let Some(done) = self.current.take() {
            self.drafts.push(done);
        }

        let mut experiments = Vec::new();
        match (&self.preset, self.drafts.is_empty()) {
            (Some((line, _)), false) => {
                let line = *line;
                self.diag(line, "preset and explicit experiment blocks are mutually exclusive");
            }
            (Some((line, name)), true) => {
                let (line, name) = (*line, name.clone());
                match expand_preset(&name, &self.defaults) {
                    Some(grid) => experiments = grid,
                    None => self.diag(
                        line,
                        format!("unknown preset '{name}' (expected one of {PRESET_NAMES:?})"),
                    ),
                }
            }
            (None, _) => {
                let drafts = std::mem::take(&mut self.drafts);
                for draft in &drafts {
                    if let Some(cfg) = self.finalize(draft) {
                        experiments.push(cfg);
                    }
                }
            }
        }

        if experiments.is_empty() && self.diagnostics.is_empty() {
            self.diagnostics
                .push("manifest defines no experiments".to_string());
        }
        if self.diagnostics.is_empty() {
            Ok(RunManifest {
                experiments,
                output_path: self.output_path,
                format: self.format,
                figure_preset: self.preset.map(|(_, name)| name),
            })
        } else {
            Err(ManifestError {
                diagnostics: self.diagnostics,
            })
        }
    }

    fn finalize(&mut self, draft: &Draft) -> Option<ExperimentConfig> {
        let before = self.diagnostics.len();

        let kind = match &draft.topology {
            Some((line, name)) => match name.parse::<TopologyKind>() {
                Ok(kind) => Some(kind),
                Err(e) => {
                    self.diag(*line, e);
                    None
                }
            },
            None => {
                self.diag(draft.line, "experiment is missing 'topology'");
                None
            }
        };

        let strategy = match &draft.attack {
            Some((line, name)) => {
                let line = *line;
                match name.as_str() {
                    "random" => Some(AttackStrategy::Random),
                    "id" => Some(AttackStrategy::IdRemoval),
                    "ib" => Some(AttackStrategy::IbRemoval),
                    "rd" => Some(AttackStrategy::RdRemoval),
                    "rb" => Some(AttackStrategy::RbRemoval),
                    "incomplete" => match draft.a {
                        Some((a_line, a)) => {
                            if !(0.0..=1.0).contains(&a) {
                                self.diag(a_line, format!("a = {a} is outside [0, 1]"));
                                None
                            } else {
                                Some(AttackStrategy::Incomplete { info: a })
                            }
                        }
                        None => {
                            self.diag(line, "incomplete attack requires 'a'");
                            None
                        }
                    },
                    other => {
                        self.diag(line, format!("unknown attack '{other}'"));
                        None
                    }
                }
            }
            None => {
                self.diag(draft.line, "experiment is missing 'attack'");
                None
            }
        };
        if let (Some((a_line, _)), Some((_, name))) = (&draft.a, &draft.attack) {
            if name != "incomplete" {
                self.diag(*a_line, "'a' is only meaningful for the incomplete attack");
            }
        }

        let p_f = match draft.p_f {
            Some((line, p_f)) => {
                let max = if self.allow_extended {
                    1.0
                } else {
                    STANDARD_MAX_FAILURE_RATE
                };
                if !(0.0..=max).contains(&p_f) {
                    if p_f > STANDARD_MAX_FAILURE_RATE && p_f <= 1.0 && !self.allow_extended {
                        self.diag(
                            line,
                            format!(
                                "p_f = {p_f} exceeds the standard 0..{STANDARD_MAX_FAILURE_RATE} envelope (pass --allow-extended to permit it)"
                            ),
                        );
                    } else {
                        self.diag(line, format!("p_f = {p_f} is outside [0, {max}]"));
                    }
                    None
                } else {
                    Some(p_f)
                }
            }
            None => {
                self.diag(draft.line, "experiment is missing 'p_f'");
                None
            }
        };

        let rewiring = match &draft.rewiring {
            Some((line, name)) => match name.parse::<RewireStrategy>() {
                Ok(s) => Some(s),
                Err(e) => {
                    self.diag(*line, e);
                    None
                }
            },
            None => Some(RewireStrategy::None),
        };
        let policy = match (rewiring, draft.p) {
            (Some(RewireStrategy::None), Some((line, _))) => {
                self.diag(line, "'p' requires a rewiring strategy");
                None
            }
            (Some(RewireStrategy::None), None) => Some(RewirePolicy::none()),
            (Some(strategy), Some((line, p))) => {
                if !(0.0..=1.0).contains(&p) {
                    self.diag(line, format!("p = {p} is outside [0, 1]"));
                    None
                } else {
                    Some(RewirePolicy { strategy, probability: p })
                }
            }
            (Some(_), None) => {
                self.diag(
                    draft.rewiring.as_ref().map(|(l, _)| *l).unwrap_or(draft.line),
                    "rewiring strategy requires 'p'",
                );
                None
            }
            (None, _) => None,
        };

        let n = draft.n.unwrap_or(self.defaults.n);
        let mean_degree = draft.mean_degree.unwrap_or(self.defaults.mean_degree);
        if n < 2 {
            self.diag(draft.line, format!("n = {n} must be at least 2"));
        } else if mean_degree <= 0.0 || mean_degree >= (n - 1) as f64 {
            self.diag(
                draft.line,
                format!("mean_degree = {mean_degree} must lie in (0, n-1)"),
            );
        }
        let trials = draft.trials.unwrap_or(self.defaults.trials);
        if trials == 0 {
            self.diag(draft.line, "trials must be at least 1");
        }

        if self.diagnostics.len() > before {
            return None;
        }
        let mut spec = TopologySpec::new(kind?, n, mean_degree);
        spec.params.can_dimensions = draft.can_dimensions;
        spec.params.chord_id_bits = draft.chord_id_bits;
        spec.params.hypergrid_max_degree = draft.hypergrid_max_degree;
        spec.params.pru_cache_size = draft.pru_cache_size;
        spec.params.pru_links_per_join = draft.pru_links_per_join;
        spec.params.pru_quota = draft.pru_quota;
        spec.params.pg_p = draft.pg_p;
        spec.params.pg_g = draft.pg_g;
        let mut config = ExperimentConfig::new(spec, AttackPlan::new(strategy?, p_f?), policy?);
        config.trials = trials;
        config.base_seed = draft.seed.unwrap_or(self.defaults.seed);
        Some(config)
    }
}

/// Parse and validate a manifest. `allow_extended` widens the failure-rate
/// envelope from 0..0.8 to 0..1.
pub fn parse_manifest(source: &str, allow_extended: bool) -> Result<RunManifest, ManifestError> {
    Parser {
        defaults: ManifestDefaults::default(),
        allow_extended,
        diagnostics: Vec::new(),
        output_path: None,
        format: OutputFormat::Csv,
        preset: None,
        drafts: Vec::new(),
        current: None,
        source,
    }
    .run()
}

/// The attack roster every preset sweeps, in canonical order.
pub fn preset_attacks() -> [AttackStrategy; 6] {
    [
        AttackStrategy::Random,
        AttackStrategy::IbRemoval,
        AttackStrategy::IdRemoval,
        AttackStrategy::RbRemoval,
        AttackStrategy::RdRemoval,
        AttackStrategy::Incomplete { info: 0.4 },
    ]
}

/// Expand a named preset into its experiment grid: every topology crossed
/// with every attack at a 60% failure rate, under the preset's rewiring
/// panels (none for fig2/fig6; none/random/greedy/betweenness at P = 0.4
/// for fig3 and P = 0.2 for fig4/fig5). Rows are ordered rewiring-panel
/// first, then topology, then attack.
pub fn expand_preset(name: &str, defaults: &ManifestDefaults) -> Option<Vec<ExperimentConfig>> {
    let panels: Vec<RewirePolicy> = match name {
        "fig2" | "fig6" => vec![RewirePolicy::none()],
        "fig3" => panel_set(0.4),
        "fig4" | "fig5" => panel_set(0.2),
        _ => return None,
    };
    let mut grid = Vec::new();
    for policy in &panels {
        for kind in TopologyKind::ALL {
            for strategy in preset_attacks() {
                let spec = TopologySpec::new(kind, defaults.n, defaults.mean_degree);
                let mut config =
                    ExperimentConfig::new(spec, AttackPlan::new(strategy, 0.6), *policy);
                config.trials = defaults.trials;
                config.base_seed = defaults.seed;
                grid.push(config);
            }
        }
    }
    Some(grid)
}

fn panel_set(p: f64) -> Vec<RewirePolicy> {
    vec![
        RewirePolicy::none(),
        RewirePolicy::new(RewireStrategy::Random, p),
        RewirePolicy::new(RewireStrategy::Greedy, p),
        RewirePolicy::new(RewireStrategy::Betweenness, p),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_manifest_parses() {
        let m = parse_manifest(
            "experiment\ntopology = er\nattack = random\np_f = 0.6\n",
            false,
        )
        .unwrap();
        assert_eq!(m.experiments.len(), 1);
        let cfg = &m.experiments[0];
        assert_eq!(cfg.topology.kind, TopologyKind::Er);
        assert_eq!(cfg.topology.n, 2000);
        assert_eq!(cfg.plan.strategy, AttackStrategy::Random);
        assert_eq!(cfg.policy.strategy, RewireStrategy::None);
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.base_seed, 42);
    }

    #[test]
    fn globals_and_overrides_flow_into_experiments() {
        let text = "\
n = 500\nmean_degree = 12\ntrials = 5\nseed = 7\nout = res.csv\nformat = json\n\
experiment\ntopology = chord\nattack = incomplete\na = 0.4\np_f = 0.6\nrewiring = greedy\np = 0.2\n\
experiment\ntopology = pru\nattack = rd\np_f = 0.4\nn = 100\ntrials = 2\npru_quota = 9\n";
        let m = parse_manifest(text, false).unwrap();
        assert_eq!(m.format, OutputFormat::Json);
        assert_eq!(m.output_path.as_deref(), Some(std::path::Path::new("res.csv")));
        assert_eq!(m.experiments.len(), 2);
        let first = &m.experiments[0];
        assert_eq!(first.topology.n, 500);
        assert_eq!(first.plan.strategy, AttackStrategy::Incomplete { info: 0.4 });
        assert_eq!(first.policy.strategy, RewireStrategy::Greedy);
        assert_eq!(first.policy.probability, 0.2);
        assert_eq!(first.trials, 5);
        assert_eq!(first.base_seed, 7);
        let second = &m.experiments[1];
        assert_eq!(second.topology.n, 100);
        assert_eq!(second.trials, 2);
        assert_eq!(second.topology.params.pru_quota, Some(9));
    }

    #[test]
    fn unknown_names_are_line_numbered() {
        let text = "experiment\ntopology = hypercube\nattack = dos\np_f = 0.6\n";
        let err = parse_manifest(text, false).unwrap_err();
        assert!(err.diagnostics.iter().any(|d| d.starts_with("line 2:")), "{err}");
        assert!(err.diagnostics.iter().any(|d| d.starts_with("line 3:")), "{err}");
    }

    #[test]
    fn failure_rate_envelope_is_enforced() {
        let text = "experiment\ntopology = er\nattack = random\np_f = 0.9\n";
        let err = parse_manifest(text, false).unwrap_err();
        assert!(err.to_string().contains("--allow-extended"), "{err}");
        let ok = parse_manifest(text, true).unwrap();
        assert_eq!(ok.experiments[0].plan.failure_rate, 0.9);
        // Even extended mode rejects rates beyond 1.
        let text = "experiment\ntopology = er\nattack = random\np_f = 1.5\n";
        assert!(parse_manifest(text, true).is_err());
    }

    #[test]
    fn out_of_range_knobs_are_rejected() {
        for (line, text) in [
            "experiment\ntopology = er\nattack = incomplete\na = 1.4\np_f = 0.6\n",
            "experiment\ntopology = er\nattack = random\np_f = 0.6\nrewiring = greedy\np = 1.2\n",
            "experiment\ntopology = er\nattack = random\np_f = 0.6\np = 0.2\n",
            "experiment\ntopology = er\nattack = rd\na = 0.4\np_f = 0.6\n",
        ]
        .into_iter()
        .enumerate()
        {
            assert!(parse_manifest(text, false).is_err(), "case {line}");
        }
    }

    #[test]
    fn empty_manifest_is_an_error() {
        let err = parse_manifest("# nothing here\n", false).unwrap_err();
        assert!(err.to_string().contains("no experiments"));
    }

    #[test]
    fn fig2_preset_matches_its_grid() {
        let m = parse_manifest("preset = fig2\n", false).unwrap();
        assert_eq!(m.experiments.len(), 36);
        assert_eq!(m.figure_preset.as_deref(), Some("fig2"));
        for cfg in &m.experiments {
            assert_eq!(cfg.plan.failure_rate, 0.6);
            assert_eq!(cfg.policy.strategy, RewireStrategy::None);
            assert_eq!(cfg.topology.n, 2000);
            assert_eq!(cfg.trials, 10);
        }
        // 6 topologies x 6 attacks, incomplete pinned at a = 0.4.
        let incomplete = m
            .experiments
            .iter()
            .filter(|c| c.plan.strategy == AttackStrategy::Incomplete { info: 0.4 })
            .count();
        assert_eq!(incomplete, 6);
    }

    #[test]
    fn rewired_presets_use_their_panel_probability() {
        let d = ManifestDefaults::default();
        for (name, p) in [("fig3", 0.4), ("fig4", 0.2), ("fig5", 0.2)] {
            let grid = expand_preset(name, &d).unwrap();
            assert_eq!(grid.len(), 144, "{name}");
            let probs: std::collections::BTreeSet<String> = grid
                .iter()
                .filter(|c| c.policy.strategy != RewireStrategy::None)
                .map(|c| format!("{}", c.policy.probability))
                .collect();
            assert_eq!(probs.len(), 1, "{name}");
            assert!(probs.contains(&format!("{p}")), "{name}");
        }
        assert_eq!(expand_preset("fig6", &d).unwrap().len(), 36);
        assert!(expand_preset("fig7", &d).is_none());
    }

    #[test]
    fn preset_and_blocks_conflict() {
        let text = "preset = fig2\nexperiment\ntopology = er\nattack = random\np_f = 0.6\n";
        assert!(parse_manifest(text, false).is_err());
    }

    #[test]
    fn inline_comments_are_stripped() {
        let text = "experiment # first\ntopology = er # random graph\nattack = random\np_f = 0.6\n";
        assert!(parse_manifest(text, false).is_ok());
    }
}
