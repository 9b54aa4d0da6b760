use std::f64::consts::PI;

use log::{debug, info};
use serde::{Deserialize, Serialize};

use super::config::{ControllerKind, LoadCaseConfig};
use crate::baselines::{cpc_baseline, mbc_ipc_step, MbcIpcState};
use crate::control::{Ftipc, RotationLog};
use crate::error::Result;
use crate::metrics::{adc, band_energy_ratio, harmonic_bands, sd, Which, WindowSpec, ADC_RATE_LIMIT};
use crate::numerics::{welch_psd, WindowKind};
use crate::plant::{DisturbanceModel, SurrogatePlant};
use crate::N_BLADES;

/// Welch segment length used for pitch spectra.
pub const PSD_SEGMENT: usize = 2048;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub u: Vec<[f64; N_BLADES]>,
    pub y: Vec<[f64; N_BLADES]>,
    pub psi: Vec<f64>,
}

impl TimeSeries {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            psi: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn blade_u(&self, i: usize) -> Vec<f64> {
        self.u.iter().map(|u| u[i]).collect()
    }

    pub fn blade_y(&self, i: usize) -> Vec<f64> {
        self.y.iter().map(|y| y[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BladeMetrics {
    pub sd_healthy: f64,
    pub sd_faulty: f64,
    pub adc_healthy: f64,
    pub adc_faulty: f64,
    /// Share of faulty-window pitch energy in the 1P/2P bands; `None` when the
    /// window is shorter than one PSD segment or the pitch never moves.
    pub band_ratio_faulty: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub window: WindowSpec,
    pub blades: Vec<BladeMetrics>,
    pub dare_failures: usize,
    pub clamp_events: usize,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: LoadCaseConfig,
    pub series: TimeSeries,
    pub rotations: Vec<RotationLog>,
    pub metrics: MetricsSummary,
}

enum Controller {
    Cpc,
    Mbc(MbcIpcState),
    Ftipc(Box<Ftipc>),
}

impl Controller {
    fn new(cfg: &LoadCaseConfig) -> Result<Self> {
        Ok(match cfg.controller {
            ControllerKind::Cpc => Controller::Cpc,
            ControllerKind::MbcIpc => Controller::Mbc(MbcIpcState::new(&cfg.mbc)),
            ControllerKind::Ftipc | ControllerKind::Uftipc => Controller::Ftipc(Box::new(Ftipc::new(
                cfg.effective_ftipc(),
                cfg.plant.period,
                cfg.plant.dt,
                // keep controller randomness independent of the disturbance stream
                cfg.seed ^ 0x5EED_C0DE,
            )?)),
        })
    }

    fn command(&mut self, k: usize, psi: f64, y: &[f64; N_BLADES], dt: f64) -> Result<[f64; N_BLADES]> {
        match self {
            Controller::Cpc => Ok(cpc_baseline(k)),
            Controller::Mbc(s) => Ok(mbc_ipc_step(s, y, psi, dt)),
            Controller::Ftipc(c) => c.command(k, y),
        }
    }
}

pub fn azimuth(k: usize, period: usize) -> f64 {
    2.0 * PI * (k % period) as f64 / period as f64
}

/// Simulates one load case: at every sample the load is measured, the
/// controller responds and the plant advances with the (possibly faulty) pitch.
pub fn run_load_case(cfg: &LoadCaseConfig) -> Result<RunResult> {
    cfg.validate()?;
    let fault = cfg.fault_scenario()?;
    let mut plant = SurrogatePlant::from_config(&cfg.plant)?;
    let d = &cfg.disturbance;
    let mut dist = DisturbanceModel::new(d.amp_1p, d.amp_2p, d.sigma_e, cfg.seed);
    let mut ctrl = Controller::new(cfg)?;
    let n = cfg.n_samples();
    let dt = cfg.plant.dt;
    let period = cfg.plant.period;
    let mut series = TimeSeries::with_capacity(n);
    info!("case {}: {} samples, controller {}", cfg.id, n, cfg.controller.as_str());
    for k in 0..n {
        let psi = azimuth(k, period);
        let y = plant.measure(k, &mut dist, &fault)?;
        let u = ctrl.command(k, psi, &y, dt)?;
        plant.advance(&u, &fault, k)?;
        series.t.push(k as f64 * dt);
        series.u.push(u);
        series.y.push(y);
        series.psi.push(psi);
    }
    let (rotations, dare_failures, clamp_events) = match &ctrl {
        Controller::Ftipc(c) => (c.rotation_log().to_vec(), c.state().dare_failures, c.state().clamp_events),
        _ => (Vec::new(), 0, 0),
    };
    let window = WindowSpec::for_run(cfg.duration_s, cfg.onset_s);
    let mut metrics = compute_metrics(&series, dt, period, &window)?;
    metrics.dare_failures = dare_failures;
    metrics.clamp_events = clamp_events;
    debug!("case {}: {:?}", cfg.id, metrics.blades);
    Ok(RunResult { config: cfg.clone(), series, rotations, metrics })
}

/// Window statistics of a stored series.
pub fn compute_metrics(series: &TimeSeries, dt: f64, period: usize, window: &WindowSpec) -> Result<MetricsSummary> {
    let n = series.len();
    let hw = window.samples(Which::Healthy, dt, n)?;
    let fw = window.samples(Which::Faulty, dt, n)?;
    let fs = 1.0 / dt;
    let bands = harmonic_bands(fs / period as f64);
    let mut blades = Vec::with_capacity(N_BLADES);
    for i in 0..N_BLADES {
        let y = series.blade_y(i);
        let u = series.blade_u(i);
        let ratio = if fw.len() >= PSD_SEGMENT {
            let psd = welch_psd(&u[fw.clone()], fs, PSD_SEGMENT, 0.5, WindowKind::Hann)?;
            Some(band_energy_ratio(&psd, &bands)?).filter(|r| r.is_finite())
        } else {
            None
        };
        blades.push(BladeMetrics {
            sd_healthy: sd(&y[hw.clone()]),
            sd_faulty: sd(&y[fw.clone()]),
            adc_healthy: adc(&u[hw.clone()], dt, ADC_RATE_LIMIT)?,
            adc_faulty: adc(&u[fw.clone()], dt, ADC_RATE_LIMIT)?,
            band_ratio_faulty: ratio,
        });
    }
    Ok(MetricsSummary { window: *window, blades, dare_failures: 0, clamp_events: 0 })
}
