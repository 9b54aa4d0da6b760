//! Surrogate three-blade rotor: per-blade second-order load channels in
//! innovation form with rotor-periodic disturbances and injectable faults.
//!
//! Signal conventions: pitch in degrees, blade-root load in arbitrary load
//! units, azimuth ψ_k = 2πk/P. The plant advances as
//!
//! ```text
//! y_k     = C x_k + g∘d_k + e_k
//! x_{k+1} = A x_k + B u_eff,k + L e_k
//! ```
//!
//! where `g` is the per-blade disturbance gain (raised on a blade with reduced
//! stiffness) and `u_eff` is the command after actuator faults, evaluated on
//! absolute pitch around the operating collective.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::N_BLADES;

pub const DT: f64 = 0.01;
pub const ROTOR_PERIOD: usize = 100;
pub const PAST_WINDOW: usize = 21;

/// Plant parameters; every field can be overridden from a run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantConfig {
    pub natural_freq_hz: f64,
    pub damping: f64,
    /// Static load change per degree of pitch (negative: pitching up unloads).
    pub dc_gain: f64,
    /// Poles of the per-blade predictor A − LC.
    pub predictor_poles: [f64; 2],
    /// Relative cross-blade coupling, entering through the innovation path.
    pub coupling: f64,
    /// Operating collective pitch in degrees; faults act on absolute pitch.
    pub collective_deg: f64,
    pub dt: f64,
    pub period: usize,
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self {
            natural_freq_hz: 4.0,
            damping: 0.7,
            dc_gain: -1.5e3,
            predictor_poles: [0.3, 0.35],
            coupling: 0.05,
            collective_deg: 0.0,
            dt: DT,
            period: ROTOR_PERIOD,
        }
    }
}

impl PlantConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.natural_freq_hz > 0.0) || !(self.damping > 0.0) {
            return bad("natural frequency and damping must be positive".into());
        }
        if !(self.dt > 0.0) || self.period < 8 {
            return bad(format!("need dt > 0 and period >= 8 samples (dt {}, period {})", self.dt, self.period));
        }
        if self.predictor_poles.iter().any(|p| !(p.abs() < 1.0)) {
            return bad("predictor poles must lie inside the unit circle".into());
        }
        if !self.coupling.is_finite() || self.coupling.abs() >= 1.0 {
            return bad(format!("coupling {} out of range", self.coupling));
        }
        if !self.dc_gain.is_finite() || self.dc_gain == 0.0 || !self.collective_deg.is_finite() {
            return bad("dc gain must be finite and non-zero; collective finite".into());
        }
        Ok(())
    }
}

/// Zero-order-hold discretisation of `ÿ + 2ζω ẏ + ω² y = g ω² u`.
fn blade_channel(wn_hz: f64, zeta: f64, gain: f64, dt: f64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let wn = 2.0 * PI * wn_hz;
    // augmented [[Ac, Bc], [0, 0]] · dt
    let m =
        DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, -wn * wn, -2.0 * zeta * wn, gain * wn * wn, 0.0, 0.0, 0.0]) * dt;
    let e = m.exp();
    let a = e.view((0, 0), (2, 2)).into_owned();
    let b = e.view((0, 2), (2, 1)).into_owned();
    let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    (a, b, c)
}

/// Ackermann placement of the eigenvalues of `A − LC` for a 2-state SISO channel.
fn observer_gain(a: &DMatrix<f64>, c: &DMatrix<f64>, poles: [f64; 2]) -> DMatrix<f64> {
    let obs = DMatrix::from_rows(&[c.row(0).clone_owned(), (c * a).row(0).clone_owned()]);
    let (s, p) = (poles[0] + poles[1], poles[0] * poles[1]);
    let qa = a * a - a * s + DMatrix::identity(2, 2) * p;
    let e2 = DMatrix::from_column_slice(2, 1, &[0.0, 1.0]);
    qa * obs.lu().solve(&e2).expect("observable channel")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FaultKind {
    Healthy,
    /// Pitch actuator stuck at an absolute angle.
    Pas {
        stuck_deg: f64,
    },
    /// Pitch actuator effectiveness reduced to `(1 − scale)`.
    Pad {
        scale: f64,
    },
    /// Blade stiffness scaled by `a`.
    BladeStiffness {
        a: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaultScenario {
    pub kind: FaultKind,
    /// Faulty blade, 1-based.
    pub blade: usize,
    /// First faulty sample index.
    pub onset: usize,
}

impl FaultScenario {
    pub fn healthy() -> Self {
        Self { kind: FaultKind::Healthy, blade: 1, onset: usize::MAX }
    }

    pub fn new(kind: FaultKind, blade: usize, onset: usize) -> Result<Self> {
        let f = Self { kind, blade, onset };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=N_BLADES).contains(&self.blade) {
            return Err(Error::Config(format!("faulty blade {} not in 1..={N_BLADES}", self.blade)));
        }
        match self.kind {
            FaultKind::Pad { scale } if !(scale > 0.0 && scale <= 1.0) => {
                Err(Error::Config(format!("PAD scale {scale} must lie in (0, 1]")))
            }
            FaultKind::BladeStiffness { a } if !(a > 0.0 && a <= 1.0) => {
                Err(Error::Config(format!("stiffness scale {a} must lie in (0, 1]")))
            }
            FaultKind::Pas { stuck_deg } if !stuck_deg.is_finite() => {
                Err(Error::Config("stuck angle must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn active(&self, k: usize) -> bool {
        !matches!(self.kind, FaultKind::Healthy) && k >= self.onset
    }
}

/// Effective differential pitch after actuator faults. Faults act on the
/// absolute angle `collective + u`; the returned value is again relative to
/// the operating collective.
pub fn apply_actuator_fault(
    u_cmd: &[f64; N_BLADES],
    fault: &FaultScenario,
    k: usize,
    collective_deg: f64,
) -> [f64; N_BLADES] {
    let mut u = *u_cmd;
    if !fault.active(k) {
        return u;
    }
    let f = fault.blade - 1;
    match fault.kind {
        FaultKind::Pas { stuck_deg } => u[f] = stuck_deg - collective_deg,
        FaultKind::Pad { scale } => u[f] = (1.0 - scale) * (collective_deg + u[f]) - collective_deg,
        FaultKind::Healthy | FaultKind::BladeStiffness { .. } => {}
    }
    u
}

/// Periodic blade-load disturbance plus white innovation.
#[derive(Debug, Clone)]
pub struct DisturbanceModel {
    pub amp_1p: [f64; N_BLADES],
    pub amp_2p: [f64; N_BLADES],
    /// Blade azimuth offsets; the 2P term uses twice the offset.
    pub phase: [f64; N_BLADES],
    pub sigma_e: f64,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl DisturbanceModel {
    pub fn new(amp_1p: f64, amp_2p: f64, sigma_e: f64, seed: u64) -> Self {
        Self {
            amp_1p: [amp_1p; N_BLADES],
            amp_2p: [amp_2p; N_BLADES],
            phase: [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0],
            sigma_e,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn periodic(&self, k: usize, period: usize) -> [f64; N_BLADES] {
        let psi = 2.0 * PI * (k % period) as f64 / period as f64;
        std::array::from_fn(|i| {
            let th = psi + self.phase[i];
            self.amp_1p[i] * th.sin() + self.amp_2p[i] * (2.0 * th).sin()
        })
    }

    pub fn innovation(&mut self) -> [f64; N_BLADES] {
        let s = self.sigma_e;
        std::array::from_fn(|_| {
            let z: f64 = StandardNormal.sample(&mut self.rng);
            s * z
        })
    }
}

#[derive(Debug, Clone)]
pub struct SurrogatePlant {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub x: DVector<f64>,
    pub dt: f64,
    pub period: usize,
    pub collective_deg: f64,
    pub disturbance_gain: [f64; N_BLADES],
    config: PlantConfig,
    wn_scale: [f64; N_BLADES],
    blade_fault_applied: bool,
    last_e: [f64; N_BLADES],
}

pub fn default_plant() -> SurrogatePlant {
    SurrogatePlant::from_config(&PlantConfig::default()).expect("default plant parameters are valid")
}

impl SurrogatePlant {
    pub fn from_config(cfg: &PlantConfig) -> Result<Self> {
        cfg.validate()?;
        Self::build(cfg, [1.0; N_BLADES])
    }

    fn build(cfg: &PlantConfig, wn_scale: [f64; N_BLADES]) -> Result<Self> {
        let n = 2 * N_BLADES;
        let mut a = DMatrix::zeros(n, n);
        let mut b = DMatrix::zeros(n, N_BLADES);
        let mut c = DMatrix::zeros(N_BLADES, n);
        let mut l = DMatrix::zeros(n, N_BLADES);
        for (i, scale) in wn_scale.iter().enumerate() {
            let (ai, bi, ci) = blade_channel(cfg.natural_freq_hz * scale, cfg.damping, cfg.dc_gain, cfg.dt);
            let li = observer_gain(&ai, &ci, cfg.predictor_poles);
            let s = 2 * i;
            a.view_mut((s, s), (2, 2)).copy_from(&ai);
            b.view_mut((s, i), (2, 1)).copy_from(&bi);
            c.view_mut((i, s), (1, 2)).copy_from(&ci);
            for m in 0..N_BLADES {
                let w = if m == i { 1.0 } else { cfg.coupling };
                l.view_mut((s, m), (2, 1)).copy_from(&(&li * w));
            }
        }
        let plant = Self {
            a,
            b,
            c,
            l,
            x: DVector::zeros(n),
            dt: cfg.dt,
            period: cfg.period,
            collective_deg: cfg.collective_deg,
            disturbance_gain: [1.0; N_BLADES],
            config: cfg.clone(),
            wn_scale,
            blade_fault_applied: false,
            last_e: [0.0; N_BLADES],
        };
        for (m, what) in [(&plant.a, "A"), (&plant.predictor_matrix(), "A - LC")] {
            let rho = crate::numerics::spectral_radius(m);
            if rho >= 1.0 {
                return Err(Error::Config(format!("surrogate {what} has spectral radius {rho:.4} >= 1")));
            }
        }
        Ok(plant)
    }

    pub fn config(&self) -> &PlantConfig {
        &self.config
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    /// Ã = A − LC.
    pub fn predictor_matrix(&self) -> DMatrix<f64> {
        &self.a - &self.l * &self.c
    }

    /// Static input-to-output gain C(I − A)⁻¹B.
    pub fn dc_gain(&self) -> DMatrix<f64> {
        let n = self.n_states();
        let m = DMatrix::<f64>::identity(n, n) - &self.a;
        &self.c * m.lu().solve(&self.b).expect("A is stable, I - A invertible")
    }

    /// (A, B, C, L) of blade `i`'s own channel (0-based), ignoring coupling.
    pub fn blade_channel_matrices(&self, i: usize) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let s = 2 * i;
        (
            self.a.view((s, s), (2, 2)).into_owned(),
            self.b.view((s, i), (2, 1)).into_owned(),
            self.c.view((i, s), (1, 2)).into_owned(),
            self.l.view((s, i), (2, 1)).into_owned(),
        )
    }

    pub fn reset(&mut self) {
        self.x.fill(0.0);
        self.last_e = [0.0; N_BLADES];
    }

    fn sync_fault(&mut self, fault: &FaultScenario, k: usize) -> Result<()> {
        if !self.blade_fault_applied && fault.active(k) {
            if let FaultKind::BladeStiffness { .. } = fault.kind {
                let faulted = apply_blade_fault(self, fault)?;
                *self = faulted;
                self.blade_fault_applied = true;
            }
        }
        Ok(())
    }

    /// Output at sample `k`; draws (and remembers) the innovation `e_k`.
    pub fn measure(&mut self, k: usize, dist: &mut DisturbanceModel, fault: &FaultScenario) -> Result<[f64; N_BLADES]> {
        self.sync_fault(fault, k)?;
        let d = dist.periodic(k, self.period);
        let e = dist.innovation();
        self.last_e = e;
        let cx = &self.c * &self.x;
        Ok(std::array::from_fn(|i| cx[i] + self.disturbance_gain[i] * d[i] + e[i]))
    }

    /// Advances the state with the command applied at sample `k`.
    pub fn advance(&mut self, u_cmd: &[f64; N_BLADES], fault: &FaultScenario, k: usize) -> Result<[f64; N_BLADES]> {
        let u = apply_actuator_fault(u_cmd, fault, k, self.collective_deg);
        let uv = DVector::from_column_slice(&u);
        let ev = DVector::from_column_slice(&self.last_e);
        let next = &self.a * &self.x + &self.b * uv + &self.l * ev;
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Diverged(k));
        }
        self.x = next;
        Ok(u)
    }

    /// Measure then advance: returns `y_k` for a command known in advance.
    pub fn step(
        &mut self,
        u_cmd: &[f64; N_BLADES],
        dist: &mut DisturbanceModel,
        fault: &FaultScenario,
        k: usize,
    ) -> Result<[f64; N_BLADES]> {
        let y = self.measure(k, dist, fault)?;
        self.advance(u_cmd, fault, k)?;
        Ok(y)
    }
}

/// Plant with the faulty blade's stiffness scaled by `a`: natural frequency
/// ×√a and 1P/2P disturbance-to-load gain ×1/a. The state is carried over.
pub fn apply_blade_fault(plant: &SurrogatePlant, fault: &FaultScenario) -> Result<SurrogatePlant> {
    let FaultKind::BladeStiffness { a } = fault.kind else {
        return Err(Error::InvalidParameter("apply_blade_fault needs a blade-stiffness fault".into()));
    };
    fault.validate()?;
    let f = fault.blade - 1;
    let mut scale = plant.wn_scale;
    scale[f] *= a.sqrt();
    let mut out = SurrogatePlant::build(&plant.config, scale)?;
    out.x = plant.x.clone();
    out.collective_deg = plant.collective_deg;
    out.disturbance_gain = plant.disturbance_gain;
    out.disturbance_gain[f] /= a;
    out.last_e = plant.last_e;
    out.blade_fault_applied = plant.blade_fault_applied;
    Ok(out)
}

/// Exact predictor Markov row `[CÃ^{p−1}B … CB | CÃ^{p−1}L … CL]`.
pub fn markov_oracle_from(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    l: &DMatrix<f64>,
    p: usize,
) -> DMatrix<f64> {
    let at = a - l * c;
    let (ny, nu) = (c.nrows(), b.ncols());
    let mut out = DMatrix::zeros(ny, p * (nu + ny));
    let mut cap = c.clone(); // C Ã^j
    for j in 0..p {
        let pos = p - 1 - j;
        out.view_mut((0, pos * nu), (ny, nu)).copy_from(&(&cap * b));
        out.view_mut((0, p * nu + pos * ny), (ny, ny)).copy_from(&(&cap * l));
        cap = &cap * &at;
    }
    out
}

pub fn markov_oracle(plant: &SurrogatePlant, p: usize) -> DMatrix<f64> {
    markov_oracle_from(&plant.a, &plant.b, &plant.c, &plant.l, p)
}
