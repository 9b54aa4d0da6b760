use std::path::Path;

use log::{error, info};
use rayon::prelude::*;

use super::config::CampaignConfig;
use super::io::write_result;
use super::run::{run_load_case, MetricsSummary};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub id: String,
    pub result: std::result::Result<MetricsSummary, String>,
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub outcomes: Vec<RunOutcome>,
}

impl CampaignReport {
    pub fn n_failed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.result.is_err()).count()
    }
}

/// Runs every case on a pool of `jobs` threads. A failing case is logged and
/// reported; the others still run and are written to `out`.
pub fn run_campaign(cfg: &CampaignConfig, jobs: usize, out: &Path) -> Result<CampaignReport> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("campaign.json"), serde_json::to_string_pretty(cfg)?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes = pool.install(|| {
        cfg.cases
            .par_iter()
            .map(|case| {
                let result = run_load_case(case)
                    .and_then(|r| {
                        write_result(&r, out)?;
                        Ok(r.metrics)
                    })
                    .map_err(|e| {
                        error!("case {} failed: {e}", case.id);
                        e.to_string()
                    });
                if result.is_ok() {
                    info!("case {} done", case.id);
                }
                RunOutcome { id: case.id.clone(), result }
            })
            .collect::<Vec<_>>()
    });
    Ok(CampaignReport { outcomes })
}
