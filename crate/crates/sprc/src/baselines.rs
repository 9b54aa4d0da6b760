//! Comparison controllers: the constant-collective baseline and a
//! Coleman-transform (multi-blade coordinate) IPC.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::N_BLADES;

/// Constant operating collective: no differential pitch action.
pub fn cpc_baseline(_k: usize) -> [f64; N_BLADES] {
    [0.0; N_BLADES]
}

fn blade_azimuths(psi: f64) -> [f64; N_BLADES] {
    std::array::from_fn(|i| psi + 2.0 * PI * i as f64 / N_BLADES as f64)
}

/// Rotating-frame loads to fixed-frame (tilt, yaw).
pub fn coleman_forward(y: &[f64; N_BLADES], psi: f64) -> (f64, f64) {
    let az = blade_azimuths(psi);
    let k = 2.0 / N_BLADES as f64;
    let tilt = k * y.iter().zip(&az).map(|(v, a)| v * a.cos()).sum::<f64>();
    let yaw = k * y.iter().zip(&az).map(|(v, a)| v * a.sin()).sum::<f64>();
    (tilt, yaw)
}

pub fn coleman_inverse(tilt: f64, yaw: f64, psi: f64) -> [f64; N_BLADES] {
    blade_azimuths(psi).map(|a| tilt * a.cos() + yaw * a.sin())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MbcConfig {
    pub kp: f64,
    pub ki: f64,
    pub azimuth_offset: f64,
    /// Pitch authority: integrator anti-windup and per-blade command bound (deg).
    pub cap: f64,
}

impl Default for MbcConfig {
    fn default() -> Self {
        // Proportional action alone gives roughly half the healthy 1P load SD
        // reduction; any integral action drives the fixed-frame tilt/yaw to
        // zero on this linear plant and overshoots that target.
        Self { kp: 8e-4, ki: 0.0, azimuth_offset: 0.0, cap: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MbcIpcState {
    pub integrator: [f64; 2],
    pub kp: f64,
    pub ki: f64,
    pub psi0: f64,
    pub cap: f64,
}

impl MbcIpcState {
    pub fn new(cfg: &MbcConfig) -> Self {
        Self { integrator: [0.0; 2], kp: cfg.kp, ki: cfg.ki, psi0: cfg.azimuth_offset, cap: cfg.cap.abs() }
    }
}

/// PI on tilt/yaw, inverse Coleman back to blade pitch. The controller only
/// sees loads, so actuator faults reach it solely through the loads.
pub fn mbc_ipc_step(state: &mut MbcIpcState, y: &[f64; N_BLADES], psi: f64, dt: f64) -> [f64; N_BLADES] {
    let psi = psi + state.psi0;
    let (tilt, yaw) = coleman_forward(y, psi);
    let cap = state.cap;
    for (acc, e) in state.integrator.iter_mut().zip([tilt, yaw]) {
        *acc = (*acc + state.ki * dt * e).clamp(-cap, cap);
    }
    let t = state.integrator[0] + state.kp * tilt;
    let w = state.integrator[1] + state.kp * yaw;
    coleman_inverse(t, w, psi).map(|u| u.clamp(-cap, cap))
}
