//! Load cases, campaigns, persistence and comparison tables.

mod campaign;
mod compare;
mod config;
mod io;
mod run;

pub use campaign::{run_campaign, CampaignReport, RunOutcome};
pub use compare::{compare, family_summary, ComparisonRow, ComparisonTable, FamilyRow};
pub use config::{
    default_campaign, CampaignConfig, ControllerKind, DisturbanceConfig, LoadCaseConfig, DEFAULT_CAMPAIGN_SEED,
};
pub use io::{
    load_results, metrics_path, read_series_csv, series_path, write_result, write_series_csv, MetricsFile,
    SERIES_HEADER,
};
pub use run::{
    azimuth, compute_metrics, run_load_case, BladeMetrics, MetricsSummary, RunResult, TimeSeries, PSD_SEGMENT,
};
