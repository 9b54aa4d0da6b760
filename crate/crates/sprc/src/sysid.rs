//! Online predictor-based identification on periodic differences.
//!
//! With δs_k = s_k − s_{k−P}, the exactly periodic disturbance drops out and
//! each blade obeys the truncated predictor
//!
//! ```text
//! δy_k ≈ Σ_{m=0}^{p−1} CÃ^m B δu_{k−1−m} + CÃ^m L δy_{k−1−m}
//! ```
//!
//! One RLS problem per blade estimates the row
//! `Ξ_(i) = [CÃ^{p−1}B … CB | CÃ^{p−1}L … CL]` from the blade's own pitch and
//! load history; regressors are ordered oldest sample first.

use nalgebra::{DMatrix, RowDVector};

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{RlsState, RLS_DELTA};
use crate::N_BLADES;

pub const DEFAULT_LAMBDA: f64 = 0.99999;

/// Ring buffer of the last `P + p + 1` samples of each channel.
///
/// Channels `0..N_BLADES` hold pitch commands, `N_BLADES..2·N_BLADES` loads.
#[derive(Debug, Clone)]
pub struct PeriodicBuffer {
    period: usize,
    window: usize,
    cap: usize,
    channels: usize,
    data: Vec<f64>,
    next: usize,
}

impl PeriodicBuffer {
    pub fn new(period: usize, window: usize, channels: usize) -> Self {
        let cap = period + window + 1;
        Self { period, window, cap, channels, data: vec![0.0; cap * channels], next: 0 }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of samples pushed so far; the next push is sample `len()`.
    pub fn len(&self) -> usize {
        self.next
    }

    pub fn is_empty(&self) -> bool {
        self.next == 0
    }

    pub fn push(&mut self, sample: &[f64]) -> Result<()> {
        if sample.len() != self.channels {
            return Err(Error::Dimension(format!("sample has {} channels, buffer {}", sample.len(), self.channels)));
        }
        let slot = (self.next % self.cap) * self.channels;
        self.data[slot..slot + self.channels].copy_from_slice(sample);
        self.next += 1;
        Ok(())
    }

    fn get(&self, channel: usize, k: usize) -> Option<f64> {
        if k >= self.next || k + self.cap < self.next || channel >= self.channels {
            return None;
        }
        Some(self.data[(k % self.cap) * self.channels + channel])
    }

    /// δs_k = s_k − s_{k−P}.
    pub fn periodic_difference(&self, channel: usize, k: usize) -> Result<f64> {
        let missing = || Error::InsufficientHistory { requested: k, required: self.period + 1 };
        if k < self.period {
            return Err(missing());
        }
        let now = self.get(channel, k).ok_or_else(missing)?;
        let then = self.get(channel, k - self.period).ok_or_else(missing)?;
        Ok(now - then)
    }

    /// `[δu_{i,k−p+1} … δu_{i,k} | δy_{i,k−p+1} … δy_{i,k}]` for blade `i` (0-based).
    pub fn build_regressor(&self, blade: usize, k: usize) -> Result<Vec<f64>> {
        let p = self.window;
        if k + 1 < p + self.period {
            return Err(Error::InsufficientHistory { requested: k, required: self.period + p });
        }
        let mut z = Vec::with_capacity(2 * p);
        for ch in [blade, N_BLADES + blade] {
            for s in k + 1 - p..=k {
                z.push(self.periodic_difference(ch, s)?);
            }
        }
        Ok(z)
    }
}

/// Three independent per-blade RLS estimators of the predictor Markov row.
#[derive(Debug, Clone)]
pub struct MarkovEstimate {
    rls: Vec<RlsState>,
    p: usize,
    period: usize,
    updates: usize,
}

impl MarkovEstimate {
    pub fn new(period: usize, p: usize, lambda: f64) -> Result<Self> {
        let rls = (0..N_BLADES).map(|_| RlsState::new(1, 2 * p, lambda, RLS_DELTA)).collect::<Result<Vec<_>>>()?;
        Ok(Self { rls, p, period, updates: 0 })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn rls(&self, blade: usize) -> &RlsState {
        &self.rls[blade]
    }

    /// Ξ̂_(i), 1 × 2p.
    pub fn row(&self, blade: usize) -> RowDVector<f64> {
        self.rls[blade].estimate().row(0).clone_owned()
    }

    /// Ξ̂ with one row per blade.
    pub fn assembled(&self) -> DMatrix<f64> {
        DMatrix::from_rows(&(0..N_BLADES).map(|i| self.row(i)).collect::<Vec<_>>())
    }

    /// One RLS update per blade: regressor window ending at k−1, target δy_k.
    pub fn identify_step(&mut self, regressors: &[Vec<f64>; N_BLADES], dy: &[f64; N_BLADES]) -> Result<()> {
        ensure_finite(dy, "identification target")?;
        for (i, rls) in self.rls.iter_mut().enumerate() {
            rls.update(&regressors[i], &dy[i..i + 1])?;
        }
        self.updates += 1;
        Ok(())
    }
}

/// Buffering plus estimation, fed one (u_k, y_k) pair per sample.
#[derive(Debug, Clone)]
pub struct Identifier {
    buffer: PeriodicBuffer,
    estimate: MarkovEstimate,
}

impl Identifier {
    pub fn new(period: usize, p: usize, lambda: f64) -> Result<Self> {
        Ok(Self {
            buffer: PeriodicBuffer::new(period, p, 2 * N_BLADES),
            estimate: MarkovEstimate::new(period, p, lambda)?,
        })
    }

    pub fn estimate(&self) -> &MarkovEstimate {
        &self.estimate
    }

    pub fn buffer(&self) -> &PeriodicBuffer {
        &self.buffer
    }

    /// Records sample `k` (which must equal the number of samples seen) and
    /// updates the estimate once enough history exists.
    pub fn record(&mut self, u: &[f64; N_BLADES], y: &[f64; N_BLADES]) -> Result<()> {
        let mut s = [0.0; 2 * N_BLADES];
        s[..N_BLADES].copy_from_slice(u);
        s[N_BLADES..].copy_from_slice(y);
        self.buffer.push(&s)?;
        let k = self.buffer.len() - 1;
        if k < self.buffer.period() + self.buffer.window() {
            return Ok(());
        }
        let mut regs: [Vec<f64>; N_BLADES] = Default::default();
        let mut dy = [0.0; N_BLADES];
        for i in 0..N_BLADES {
            regs[i] = self.buffer.build_regressor(i, k - 1)?;
            dy[i] = self.buffer.periodic_difference(N_BLADES + i, k)?;
        }
        self.estimate.identify_step(&regs, &dy)
    }
}

/// Open-loop impulse response `g_1 … g_p` (g_j = CA^{j−1}B) implied by a
/// predictor row: `g_j = b_{j−1} + Σ_{i=1}^{j−1} a_{i−1} g_{j−i}`.
///
/// With noise-free data the predictor row itself is not unique (any
/// combination of the input-driven recursion fits), but this response is.
pub fn implied_impulse_response(row: &[f64], p: usize) -> Vec<f64> {
    assert_eq!(row.len(), 2 * p, "predictor row must have 2p entries");
    let b = |m: usize| row[p - 1 - m];
    let a = |m: usize| row[2 * p - 1 - m];
    let mut g = vec![0.0; p];
    for j in 1..=p {
        let mut v = b(j - 1);
        for i in 1..j {
            v += a(i - 1) * g[j - i - 1];
        }
        g[j - 1] = v;
    }
    g
}

/// Relative error between two sequences, ‖x − y‖ / ‖y‖.
pub fn relative_error(x: &[f64], truth: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = truth.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}
