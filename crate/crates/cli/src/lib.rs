//! Batch runner: validates scenario configs, runs them in a worker pool and
//! writes `report.json` (and `trajectory.csv`) per scenario.
//!
//! All configs are validated and all scenarios computed before the first
//! file is written, so a failing run leaves no output behind.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod presets;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use config::{Output, ScenarioConfig};
pub use error::CliError;
pub use pipeline::{run_scenario, ScenarioOutput};
pub use report::RunReport;

/// Environment variable overriding the output directory.
pub const OUT_ENV: &str = "BERRYSHIFT_OUT";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub configs: Vec<PathBuf>,
    pub presets: Vec<String>,
    pub out: Option<PathBuf>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub name: String,
    pub files: Vec<PathBuf>,
    pub elapsed: Duration,
    pub report: RunReport,
}

/// `--out` beats the environment variable, which beats `./out`.
pub fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("out"),
    }
}

/// Loads and validates every requested scenario, sorted by name.
pub fn load_scenarios(opts: &RunOptions) -> Result<Vec<ScenarioConfig>, CliError> {
    let mut configs = Vec::new();
    for name in &opts.presets {
        let text = presets::preset(name).ok_or_else(|| {
            let known: Vec<_> = presets::names().collect();
            CliError::config("--preset", "preset", format!("unknown preset {name:?}; known: {}", known.join(", ")))
        })?;
        let origin = format!("preset {name}");
        configs.push(config::validate(&config::parse_str(text, &origin)?, &origin, opts.steps)?);
    }
    for path in &opts.configs {
        let origin = path.display().to_string();
        configs.push(config::validate(&config::load_file(path)?, &origin, opts.steps)?);
    }
    if configs.is_empty() {
        return Err(CliError::config("command line", "config", "give a config file or --preset NAME"));
    }
    configs.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = configs.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(CliError::config("command line", "name", format!("scenario {:?} given twice", w[0].name)));
    }
    Ok(configs)
}

/// Runs scenarios in parallel; results come back in input order.
pub fn compute(configs: &[ScenarioConfig]) -> Result<Vec<(ScenarioOutput, Duration)>, CliError> {
    configs
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            run_scenario(c).map(|o| (o, start.elapsed()))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

pub fn execute(opts: &RunOptions) -> Result<Vec<RunSummary>, CliError> {
    let configs = load_scenarios(opts)?;
    let results = compute(&configs)?;
    let out = resolve_out_dir(opts.out.as_deref());
    let mut summaries = Vec::with_capacity(results.len());
    for (output, elapsed) in results {
        let files = output::write_scenario(&out, &output)?;
        summaries.push(RunSummary { name: output.report.name.clone(), files, elapsed, report: output.report });
    }
    Ok(summaries)
}
