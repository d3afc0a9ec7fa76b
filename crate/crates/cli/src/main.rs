//! overlay-siege: run overlay robustness experiment grids and emit tidy
//! tables. Progress goes to stderr, results to the output file or stdout.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use overlay_siege::manifest::{self, ManifestDefaults, OutputFormat, RunManifest};
use overlay_siege::output;
use overlay_siege_core::engine::{self, CampaignSummary};

const SEED_ENV: &str = "OVERLAY_SIEGE_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "overlay-siege",
    version,
    about = "Monte Carlo robustness experiments for P2P overlay topologies"
)]
struct Cli {
    /// Manifest file describing the experiment grid
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    manifest: Option<PathBuf>,

    /// Named experiment grid: fig2, fig3, fig4, fig5, or fig6
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Override the node count of every experiment
    #[arg(long, value_name = "N")]
    n: Option<usize>,

    /// Override the trial count of every experiment
    #[arg(long, value_name = "T")]
    trials: Option<usize>,

    /// Override the base seed of every experiment
    #[arg(long, value_name = "S")]
    seed: Option<u64>,

    /// Output format (overrides the manifest)
    #[arg(long, value_name = "FMT")]
    format: Option<String>,

    /// Output path (defaults to the manifest's `out`, then stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Cap worker threads shared by campaigns and trials
    #[arg(long, value_name = "K")]
    jobs: Option<usize>,

    /// Permit failure rates beyond the standard 0..0.8 envelope
    #[arg(long)]
    allow_extended: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let mut manifest = load_manifest(&cli)?;
    apply_overrides(&mut manifest, &cli)?;

    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }

    let total = manifest.experiments.len();
    eprintln!("running {total} campaign(s)");
    let results = engine::run_sweep_with_progress(&manifest.experiments, |i, outcome| {
        let cfg = &manifest.experiments[i];
        match outcome {
            Ok(s) => eprintln!(
                "[{}/{total}] {} vs {} (rewiring {}) -> disconnection {:.3}, giant {:.1}",
                i + 1,
                cfg.topology.kind,
                cfg.plan.strategy,
                cfg.policy.strategy,
                s.disconnection_probability,
                s.giant.mean,
            ),
            Err(e) => eprintln!(
                "[{}/{total}] {} vs {} failed: {e}",
                i + 1,
                cfg.topology.kind,
                cfg.plan.strategy
            ),
        }
    });

    let mut summaries: Vec<CampaignSummary> = Vec::with_capacity(results.len());
    let mut failed_campaigns = 0usize;
    let mut partial_campaigns = 0usize;
    for result in results {
        match result {
            Ok(summary) => {
                if summary.generation_failures > 0 {
                    partial_campaigns += 1;
                }
                summaries.push(summary);
            }
            Err(_) => failed_campaigns += 1,
        }
    }

    if summaries.is_empty() {
        return Err("every campaign failed; nothing to emit".into());
    }
    match &manifest.output_path {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            output::emit(&summaries, manifest.format, &mut file).map_err(|e| e.to_string())?;
            file.flush().map_err(|e| e.to_string())?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            output::emit(&summaries, manifest.format, &mut out).map_err(|e| e.to_string())?;
        }
    }

    if failed_campaigns > 0 || partial_campaigns > 0 {
        eprintln!(
            "{failed_campaigns} campaign(s) failed, {partial_campaigns} had failed trials"
        );
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn load_manifest(cli: &Cli) -> Result<RunManifest, String> {
    if let Some(path) = &cli.manifest {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        return manifest::parse_manifest(&text, cli.allow_extended).map_err(|e| e.to_string());
    }
    if let Some(name) = &cli.preset {
        let defaults = ManifestDefaults {
            n: cli.n.unwrap_or(2000),
            mean_degree: 18.0,
            trials: cli.trials.unwrap_or(10),
            seed: cli.seed.unwrap_or(42),
        };
        let experiments = manifest::expand_preset(name, &defaults)
            .ok_or_else(|| format!("unknown preset '{name}'"))?;
        return Ok(RunManifest {
            experiments,
            output_path: None,
            format: OutputFormat::Csv,
            figure_preset: Some(name.clone()),
        });
    }
    Err("one of --manifest or --preset is required".into())
}

/// Flag and environment overrides. Precedence for the seed: --seed beats
/// OVERLAY_SIEGE_SEED beats the manifest value.
fn apply_overrides(manifest: &mut RunManifest, cli: &Cli) -> Result<(), String> {
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(text) => Some(
            text.parse::<u64>()
                .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got '{text}'"))?,
        ),
        Err(_) => None,
    };
    let seed = cli.seed.or(env_seed);
    for cfg in &mut manifest.experiments {
        if let Some(n) = cli.n {
            if n < 2 {
                return Err(format!("--n {n} must be at least 2"));
            }
            if cfg.topology.mean_degree_target >= (n - 1) as f64 {
                return Err(format!(
                    "--n {n} is too small for mean degree {}",
                    cfg.topology.mean_degree_target
                ));
            }
            cfg.topology.n = n;
        }
        if let Some(trials) = cli.trials {
            if trials == 0 {
                return Err("--trials must be at least 1".into());
            }
            cfg.trials = trials;
        }
        if let Some(seed) = seed {
            cfg.base_seed = seed;
        }
    }
    if let Some(format) = &cli.format {
        manifest.format = format.parse()?;
    }
    if let Some(out) = &cli.out {
        manifest.output_path = Some(out.clone());
    }
    Ok(())
}
