//! Load and actuator metrics: SD and relative SD reduction, actuator duty
//! cycle, spectral band energies and healthy/faulty window handling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::PsdEstimate;

pub const ADC_RATE_LIMIT: f64 = 10.0;

/// Relative SD reduction with respect to a baseline; negative when loads grow.
pub fn rsd(sd_baseline: f64, sd_ipc: f64) -> Result<f64> {
    if !(sd_baseline > 0.0) {
        return Err(Error::InvalidParameter(format!("baseline SD must be positive, got {sd_baseline}")));
    }
    Ok((sd_baseline - sd_ipc) / sd_baseline)
}

/// Actuator duty cycle: mean |du/dt| over the series divided by the rate limit.
pub fn adc(pitch: &[f64], dt: f64, rate_limit: f64) -> Result<f64> {
    if !(rate_limit > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidParameter("ADC needs dt > 0 and rate limit > 0".into()));
    }
    if pitch.len() < 2 {
        return Ok(0.0);
    }
    let travel: f64 = pitch.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let duration = dt * (pitch.len() - 1) as f64;
    Ok(travel / duration / rate_limit)
}

/// Share of spectral energy inside the given bands (trapezoidal integration).
pub fn band_energy_ratio(psd: &PsdEstimate, bands: &[[f64; 2]]) -> Result<f64> {
    if bands.is_empty() {
        return Err(Error::InvalidParameter("no bands given".into()));
    }
    let nyq = psd.frequencies.last().copied().unwrap_or(0.0);
    for b in bands {
        if !(b[0] >= 0.0 && b[1] > b[0] && b[1] <= nyq + 1e-12) {
            return Err(Error::InvalidParameter(format!("band {b:?} outside [0, {nyq}]")));
        }
    }
    let total = psd.total_power();
    if total <= 0.0 {
        return Ok(0.0);
    }
    let inside: f64 = bands.iter().map(|b| psd.band_power(b[0], b[1])).sum();
    Ok((inside / total).clamp(0.0, 1.0))
}

/// 1P and 2P bands as `[0.9, 1.1]` × each harmonic.
pub fn harmonic_bands(f_1p: f64) -> Vec<[f64; 2]> {
    [1.0, 2.0].iter().map(|h| [0.9 * h * f_1p, 1.1 * h * f_1p]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub healthy: [f64; 2],
    pub faulty: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Healthy,
    Faulty,
}

impl WindowSpec {
    /// Last 20% of the pre-onset and post-onset regimes.
    pub fn for_run(duration_s: f64, onset_s: f64) -> Self {
        Self { healthy: [0.8 * onset_s, onset_s], faulty: [duration_s - 0.2 * (duration_s - onset_s), duration_s] }
    }

    pub fn validate(&self, duration_s: f64, onset_s: f64) -> Result<()> {
        let [t0, t1] = self.healthy;
        let [t2, t3] = self.faulty;
        if !(0.0 <= t0 && t0 < t1 && t1 <= t2 && t2 < t3 && t3 <= duration_s + 1e-9 && onset_s <= t2) {
            return Err(Error::InvalidParameter(format!("windows {self:?} invalid for a {duration_s} s run")));
        }
        Ok(())
    }

    pub fn span(&self, which: Which) -> [f64; 2] {
        match which {
            Which::Healthy => self.healthy,
            Which::Faulty => self.faulty,
        }
    }

    /// Sample index range `[start, end)` for the selected window.
    pub fn samples(&self, which: Which, dt: f64, len: usize) -> Result<std::ops::Range<usize>> {
        let [a, b] = self.span(which);
        let start = (a / dt).round() as usize;
        let end = (b / dt).round() as usize;
        if start >= end || end > len {
            return Err(Error::InvalidParameter(format!("window [{a}, {b}] s outside a series of {len} samples")));
        }
        Ok(start..end)
    }
}

/// Sample SD (population normalisation) after removing the mean.
pub fn sd(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

pub fn windowed_sd(series: &[f64], window: &WindowSpec, which: Which, dt: f64) -> Result<f64> {
    let r = window.samples(which, dt, series.len())?;
    Ok(sd(&series[r]))
}
