use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use sprc::harness::{
    compare, load_results, run_campaign, run_load_case, write_result, CampaignConfig, ControllerKind, LoadCaseConfig,
};
use sprc::Error;

#[derive(Parser)]
#[command(name = "sprc", version, about = "Fault-tolerant repetitive pitch control on a surrogate rotor")]
struct Cli {
    /// Replace the seed of every load case.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "info")]
    log_level: log::LevelFilter,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the load cases of a config file (all, or one with --case).
    Run {
        config: PathBuf,
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a whole campaign in parallel.
    Campaign {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate load reductions of stored runs against a baseline.
    Compare {
        out_dir: PathBuf,
        #[arg(long, default_value = "cpc")]
        baseline: ControllerKind,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_RUN: u8 = 2;

/// Accepts a campaign file or a single load case.
fn load_config(path: &Path, seed: Option<u64>) -> Result<CampaignConfig, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = if value.get("cases").is_some() {
        serde_json::from_value::<CampaignConfig>(value)
    } else {
        serde_json::from_value::<LoadCaseConfig>(value).map(|c| CampaignConfig { name: String::new(), cases: vec![c] })
    }
    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if let Some(s) = seed {
        cfg.cases.iter_mut().for_each(|c| c.seed = s);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: CampaignConfig, case: Option<String>, out: &Path) -> ExitCode {
    let cases: Vec<_> = match &case {
        Some(id) => cfg.cases.into_iter().filter(|c| &c.id == id).collect(),
        None => cfg.cases,
    };
    if cases.is_empty() {
        error!("no load case '{}' in config", case.unwrap_or_default());
        return ExitCode::from(EXIT_CONFIG);
    }
    let mut failed = 0;
    for c in &cases {
        match run_load_case(c).and_then(|r| write_result(&r, out).map(|_| r)) {
            Ok(r) => {
                for (i, b) in r.metrics.blades.iter().enumerate() {
                    println!(
                        "{} blade {}: sd healthy {:.3} faulty {:.3} adc {:.4}",
                        c.id,
                        i + 1,
                        b.sd_healthy,
                        b.sd_faulty,
                        b.adc_faulty
                    );
                }
            }
            Err(e) => {
                error!("case {} failed: {e}", c.id);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        ExitCode::from(EXIT_RUN)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().filter_level(cli.log_level).format_timestamp(None).init();
    match cli.cmd {
        Cmd::Run { config, case, out } => match load_config(&config, cli.seed) {
            Ok(cfg) => run(cfg, case, &out),
            Err(e) => {
                error!("{e}");
                ExitCode::from(EXIT_CONFIG)
            }
        },
        Cmd::Campaign { config, jobs, out } => {
            let cfg = match load_config(&config, cli.seed) {
                Ok(c) => c,
                Err(e) => {
                    error!("{e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            match run_campaign(&cfg, jobs, &out) {
                Ok(rep) => {
                    let failed = rep.n_failed();
                    info!("{} runs, {} failed, results in {}", rep.outcomes.len(), failed, out.display());
                    if failed > 0 {
                        ExitCode::from(EXIT_RUN)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e @ Error::Config(_)) => {
                    error!("{e}");
                    ExitCode::from(EXIT_CONFIG)
                }
                Err(e) => {
                    error!("{e}");
                    ExitCode::from(EXIT_RUN)
                }
            }
        }
        Cmd::Compare { out_dir, baseline } => {
            let table = load_results(&out_dir).and_then(|r| compare(&r, baseline));
            match table {
                Ok(t) => {
                    print!("{}", t.render());
                    let json = out_dir.join("comparison.json");
                    if let Err(e) = serde_json::to_string_pretty(&t)
                        .map_err(Error::from)
                        .and_then(|s| Ok(std::fs::write(&json, s)?))
                    {
                        error!("cannot write {}: {e}", json.display());
                        return ExitCode::from(EXIT_RUN);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    error!("{e}");
                    ExitCode::from(EXIT_CONFIG)
                }
            }
        }
    }
}
