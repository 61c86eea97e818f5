//! Experiment runner for [`ekac_core`]: TOML configuration, function
//! files, multi-threaded streaming, CSV/JSON output and the exact
//! verification suite behind the `ekac` binary.

pub mod config;
pub mod error;
pub mod funcfile;
pub mod output;
pub mod runner;
pub mod verify;

use std::path::{Path, PathBuf};

pub use config::{preset, ExperimentConfig};
pub use error::{CliError, CliResult};

use output::{FitSummary, Provenance, StatsSummary};
use runner::{prepare, run, RunOptions};

/// `stats`: the statistics of both windows, as JSON.
pub fn cmd_stats(cfg: &ExperimentConfig, base: &Path) -> CliResult<String> {
    let p = prepare(cfg, base)?;
    Ok(output::to_json(&StatsSummary::of(&p)))
}

/// `moments`: the moment table as CSV.
pub fn cmd_moments(cfg: &ExperimentConfig, base: &Path, workers: usize) -> CliResult<String> {
    let p = prepare(cfg, base)?;
    let opts = RunOptions { with_fit: false, ..RunOptions::new(workers) };
    let out = run(&p, &opts)?;
    let report = out.moments.report(&p.truncated)?;
    Ok(output::moments_csv(&report, &Provenance::of(&p)))
}

/// Files written by [`cmd_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentFiles {
    pub moments_csv: PathBuf,
    pub histogram_csv: PathBuf,
    pub fit_json: PathBuf,
    pub stats_json: PathBuf,
}

/// `experiment`: moments CSV, histogram CSV, fit JSON and stats JSON in `out`.
pub fn cmd_experiment(
    cfg: &ExperimentConfig,
    base: &Path,
    out: &Path,
    workers: usize,
) -> CliResult<ExperimentFiles> {
    let p = prepare(cfg, base)?;
    let result = run(&p, &RunOptions::new(workers))?;
    let prov = Provenance::of(&p);
    let report = result.moments.report(&p.truncated)?;
    let fit = result.fit.expect("fit requested");
    let files = ExperimentFiles {
        moments_csv: out.join("moments.csv"),
        histogram_csv: out.join("histogram.csv"),
        fit_json: out.join("fit.json"),
        stats_json: out.join("stats.json"),
    };
    output::write(&files.moments_csv, &output::moments_csv(&report, &prov))?;
    output::write(&files.histogram_csv, &output::histogram_csv(&fit, &prov))?;
    output::write(&files.fit_json, &output::to_json(&FitSummary::of(&p, &fit)))?;
    output::write(&files.stats_json, &output::to_json(&StatsSummary::of(&p)))?;
    Ok(files)
}

/// `verify`: the seeded suite. Fails with exit code 3 when any check fails.
pub fn cmd_verify(opts: verify::SuiteOptions) -> CliResult<verify::VerifyReport> {
    verify::run_suite(opts)
}
