use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hann,
    Rectangular,
}

impl WindowKind {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            // periodic Hann, the usual choice for spectral estimation
            WindowKind::Hann => {
                (0..n).map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()).collect()
            }
            WindowKind::Rectangular => vec![1.0; n],
        }
    }
}

/// One-sided power spectral density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsdEstimate {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    pub segment_length: usize,
    pub overlap_fraction: f64,
    pub window_kind: WindowKind,
}

impl PsdEstimate {
    /// Trapezoidal integral of the PSD over `[f_lo, f_hi]`, clipped to the grid.
    pub fn band_power(&self, f_lo: f64, f_hi: f64) -> f64 {
        let f = &self.frequencies;
        let p = &self.power;
        let mut acc = 0.0;
        for i in 0..f.len().saturating_sub(1) {
            let (a, b) = (f[i].max(f_lo), f[i + 1].min(f_hi));
            if b <= a {
                continue;
            }
            let span = f[i + 1] - f[i];
            let lerp = |x: f64| p[i] + (p[i + 1] - p[i]) * (x - f[i]) / span;
            acc += 0.5 * (lerp(a) + lerp(b)) * (b - a);
        }
        acc
    }

    pub fn total_power(&self) -> f64 {
        match (self.frequencies.first(), self.frequencies.last()) {
            (Some(&lo), Some(&hi)) => self.band_power(lo, hi),
            _ => 0.0,
        }
    }
}

/// Welch averaged modified periodogram with per-segment mean removal.
pub fn welch_psd(
    signal: &[f64],
    fs: f64,
    segment_length: usize,
    overlap_fraction: f64,
    window_kind: WindowKind,
) -> Result<PsdEstimate> {
    if segment_length < 2 {
        return Err(Error::InvalidParameter("segment length must be at least 2".into()));
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::InvalidParameter(format!("overlap fraction {overlap_fraction} outside [0, 1)")));
    }
    if !(fs > 0.0) {
        return Err(Error::InvalidParameter(format!("sampling rate {fs} must be positive")));
    }
    if signal.len() < segment_length {
        return Err(Error::InvalidParameter(format!(
            "signal has {} samples, Welch needs at least {segment_length}",
            signal.len()
        )));
    }

    let n = segment_length;
    let step = ((n as f64 * (1.0 - overlap_fraction)).round() as usize).max(1);
    let n_seg = (signal.len() - n) / step + 1;
    let window = window_kind.coefficients(n);
    let wss: f64 = window.iter().map(|w| w * w).sum();

    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let n_bins = n / 2 + 1;
    let mut acc = vec![0.0; n_bins];
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for s in 0..n_seg {
        let seg = &signal[s * step..s * step + n];
        let mean = seg.iter().sum::<f64>() / n as f64;
        for (slot, (&x, &w)) in buf.iter_mut().zip(seg.iter().zip(&window)) {
            *slot = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, z) in acc.iter_mut().zip(&buf) {
            *a += z.norm_sqr();
        }
    }

    let scale = 1.0 / (fs * wss * n_seg as f64);
    let power: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let one_sided = if i == 0 || (n % 2 == 0 && i == n / 2) { 1.0 } else { 2.0 };
            a * scale * one_sided
        })
        .collect();
    let frequencies = (0..n_bins).map(|i| i as f64 * fs / n as f64).collect();
    Ok(PsdEstimate { frequencies, power, segment_length, overlap_fraction, window_kind })
}
