use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ekac::verify::{SuiteOptions, DEFAULT_VERIFY_SEED};
use ekac::{CliError, CliResult, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(name = "ekac", version, about = "Erdős–Kac laws for polynomials in additive functions")]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in configuration instead of --config.
    #[arg(long, global = true, conflicts_with = "config")]
    preset: Option<String>,
    /// Override the input size x.
    #[arg(long, global = true)]
    x: Option<u64>,
    /// Worker threads; falls back to EKAC_WORKERS, then all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the verification suite or recorded with the experiment.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print means, covariances, A_Q, B_Q and the chosen z as JSON.
    Stats,
    /// Stream the input and write moments, histogram and fit summaries.
    Experiment,
    /// Stream the input and print the moment table as CSV.
    Moments,
    /// Run the exact identity checks.
    Verify {
        /// Perturb H to demonstrate a failing check.
        #[arg(long, hide = true)]
        perturb_h: bool,
    },
    /// List the built-in presets.
    Presets,
}

fn load_config(cli: &Cli) -> CliResult<(ExperimentConfig, PathBuf)> {
    let (mut cfg, base) = match (&cli.config, &cli.preset) {
        (Some(path), _) => {
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (ExperimentConfig::load(path)?, base)
        }
        (None, Some(name)) => (ekac::preset(name)?, PathBuf::from(".")),
        (None, None) => return Err(CliError::Config("one of --config or --preset is required".into())),
    };
    if let Some(x) = cli.x {
        cfg.input = match cfg.input {
            ekac::config::InputSpec::AllIntegers { .. } => ekac::config::InputSpec::AllIntegers { x },
            ekac::config::InputSpec::ShiftedPrimes { shift, .. } => {
                ekac::config::InputSpec::ShiftedPrimes { x, shift }
            }
        };
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok((cfg, base))
}

fn out_dir(cli: &Cli, cfg: &ExperimentConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|o| o.dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn execute(cli: &Cli) -> CliResult<()> {
    let workers = ekac::runner::resolve_workers(cli.workers);
    match &cli.command {
        Command::Stats => {
            let (cfg, base) = load_config(cli)?;
            let json = ekac::cmd_stats(&cfg, &base)?;
            if let Some(dir) = &cli.out {
                ekac::output::write(&dir.join("stats.json"), &json)?;
            }
            print!("{json}");
        }
        Command::Moments => {
            let (cfg, base) = load_config(cli)?;
            let csv = ekac::cmd_moments(&cfg, &base, workers)?;
            if let Some(dir) = &cli.out {
                ekac::output::write(&dir.join("moments.csv"), &csv)?;
            }
            print!("{csv}");
        }
        Command::Experiment => {
            let (cfg, base) = load_config(cli)?;
            let dir = out_dir(cli, &cfg);
            let files = ekac::cmd_experiment(&cfg, &base, &dir, workers)?;
            for f in [&files.moments_csv, &files.histogram_csv, &files.fit_json, &files.stats_json] {
                println!("wrote {}", f.display());
            }
        }
        Command::Verify { perturb_h } => {
            let seed = cli.seed.unwrap_or(DEFAULT_VERIFY_SEED);
            let report = ekac::cmd_verify(SuiteOptions { seed, perturb_h: *perturb_h })?;
            let text = report.render();
            if let Some(dir) = &cli.out {
                ekac::output::write(&dir.join("verify.txt"), &text)?;
            }
            print!("{text}");
            if !report.all_passed() {
                return Err(CliError::Verification(format!("seed {seed}")));
            }
        }
        Command::Presets => {
            for name in ekac::config::PRESETS {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors count as configuration errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ekac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
