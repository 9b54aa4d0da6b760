use log::debug;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::basis::{build_basis, pitch_command, project_output, BasisProjection, N_COEFFS};
use super::excitation::{unrestricted_excitation_mode, ExcitationGenerator, UnrestrictedExcitation};
use super::lifted::{blade_projected, LiftedModel};
use crate::error::{Error, Result};
use crate::numerics::{solve_dare, DareSolution};
use crate::plant::{DT, PAST_WINDOW, ROTOR_PERIOD};
use crate::sysid::{Identifier, DEFAULT_LAMBDA};
use crate::N_BLADES;

const NC: usize = N_COEFFS * N_BLADES;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnrestrictedConfig {
    pub amplitude_deg: f64,
    pub cutoff_hz: f64,
}

impl Default for UnrestrictedConfig {
    fn default() -> Self {
        Self { amplitude_deg: 0.25, cutoff_hz: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FtipcConfig {
    pub alpha: f64,
    pub beta: f64,
    pub q_y: f64,
    pub q_dtheta: f64,
    pub q_dy: f64,
    pub r_weight: f64,
    /// Bound on |θ| per coefficient (degrees).
    pub theta_cap: f64,
    pub excitation_cap: f64,
    /// First-order filter coefficient of the coefficient-space PRBS.
    pub excitation_filter: f64,
    pub warmup_rotations: usize,
    pub lambda: f64,
    pub window: usize,
    pub dare_tol: f64,
    pub dare_max_iter: usize,
    /// Broadband per-sample excitation instead of the coefficient-space one.
    pub unrestricted: Option<UnrestrictedConfig>,
}

impl Default for FtipcConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.3,
            q_y: 1.0,
            q_dtheta: 0.0,
            q_dy: 1.0,
            r_weight: 5e-7,
            theta_cap: 4.0,
            excitation_cap: 0.1,
            excitation_filter: 0.5,
            warmup_rotations: 20,
            lambda: DEFAULT_LAMBDA,
            window: PAST_WINDOW,
            dare_tol: 1e-9,
            dare_max_iter: 500,
            unrestricted: None,
        }
    }
}

impl FtipcConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(0.0..=1.0).contains(&self.alpha) || !(0.0..=1.0).contains(&self.beta) {
            return bad("alpha and beta must lie in [0, 1]");
        }
        if self.q_y < 0.0 || self.q_dtheta < 0.0 || self.q_dy < 0.0 || !(self.r_weight > 0.0) {
            return bad("Q weights must be >= 0 and R weight > 0");
        }
        if !(self.theta_cap > 0.0) || self.excitation_cap < 0.0 {
            return bad("theta cap must be positive and excitation cap non-negative");
        }
        if !(0.0..1.0).contains(&self.excitation_filter) {
            return bad("excitation filter must lie in [0, 1)");
        }
        if !(self.lambda > 0.9 && self.lambda <= 1.0) {
            return bad("forgetting factor must lie in (0.9, 1]");
        }
        if self.window == 0 || !(self.dare_tol > 0.0) || self.dare_max_iter == 0 {
            return bad("window, DARE tolerance and iteration budget must be positive");
        }
        if let Some(u) = &self.unrestricted {
            if u.amplitude_deg < 0.0 || !(u.cutoff_hz > 0.0) {
                return bad("unrestricted excitation needs amplitude >= 0 and cutoff > 0");
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = NC;
        let mut q = DVector::zeros(3 * n);
        q.rows_mut(0, n).fill(self.q_y);
        q.rows_mut(n, n).fill(self.q_dtheta);
        q.rows_mut(2 * n, n).fill(self.q_dy);
        (DMatrix::from_diagonal(&q), DMatrix::identity(n, n) * self.r_weight)
    }
}

/// Projected model
///
/// ```text
/// Ā = [ I  Gu  Gy ]     B̄ = [ Hh ]
///     [ 0  0   0  ]         [ I  ]
///     [ 0  Gu  Gy ]         [ Hh ]
/// ```
///
/// on the state `[Ȳ_j; δθ_j; δȲ_j]` with input δθ_{j+1}.
pub fn state_space_from_blocks(
    gu: &DMatrix<f64>,
    gy: &DMatrix<f64>,
    hh: &DMatrix<f64>,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let ny = gu.nrows();
    let nu = gu.ncols();
    let n = 2 * ny + nu;
    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (ny, ny)).fill_with_identity();
    a.view_mut((0, ny), (ny, nu)).copy_from(gu);
    a.view_mut((0, ny + nu), (ny, ny)).copy_from(gy);
    a.view_mut((ny + nu, ny), (ny, nu)).copy_from(gu);
    a.view_mut((ny + nu, ny + nu), (ny, ny)).copy_from(gy);
    let mut b = DMatrix::zeros(n, nu);
    b.view_mut((0, 0), (ny, nu)).copy_from(hh);
    b.view_mut((ny, 0), (nu, nu)).fill_with_identity();
    b.view_mut((ny + nu, 0), (ny, nu)).copy_from(hh);
    (a, b)
}

/// `(Ā, B̄)` from a lifted model: blocks φ⁺Γ̂K_uφ, φ⁺Γ̂K_yφ, φ⁺Ĥφ.
pub fn project_state_space(lifted: &LiftedModel, basis: &BasisProjection) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = lifted.gamma_ku.nrows();
    if basis.phi.nrows() != n {
        return Err(Error::Dimension(format!("basis spans {} samples, lifted model {}", basis.phi.nrows(), n)));
    }
    let pr = |m: &DMatrix<f64>| &basis.phi_pinv * m * &basis.phi;
    Ok(state_space_from_blocks(&pr(&lifted.gamma_ku), &pr(&lifted.gamma_ky), &pr(&lifted.h_hat)))
}

/// Same blocks as [`project_state_space`] after [`super::assemble_lifted`],
/// but computed blade by blade directly from the Markov rows.
pub fn project_markov(xi: &DMatrix<f64>, p: usize, basis: &BasisProjection) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let nb = xi.nrows();
    let nc = N_COEFFS * nb;
    let (mut gu, mut gy, mut hh) = (DMatrix::zeros(nc, nc), DMatrix::zeros(nc, nc), DMatrix::zeros(nc, nc));
    for i in 0..nb {
        let row: Vec<f64> = xi.row(i).iter().copied().collect();
        let (bu, by, bh) = blade_projected(&row, p, &basis.uf, &basis.uf_pinv)?;
        for c in 0..N_COEFFS {
            for d in 0..N_COEFFS {
                gu[(c * nb + i, d * nb + i)] = bu[(c, d)];
                gy[(c * nb + i, d * nb + i)] = by[(c, d)];
                hh[(c * nb + i, d * nb + i)] = bh[(c, d)];
            }
        }
    }
    Ok(state_space_from_blocks(&gu, &gy, &hh))
}

pub fn synthesize_gain(
    a_bar: &DMatrix<f64>,
    b_bar: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<DareSolution> {
    solve_dare(a_bar, b_bar, q, r, tol, max_iter)
}

#[derive(Debug, Clone)]
pub struct ControllerState {
    pub theta: DVector<f64>,
    pub delta_theta: DVector<f64>,
    pub gain: Option<DMatrix<f64>>,
    pub alpha: f64,
    pub beta: f64,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub cap: f64,
    pub j: usize,
    pub dare_failures: usize,
    pub clamp_events: usize,
}

impl ControllerState {
    pub fn new(cfg: &FtipcConfig) -> Self {
        let (q, r) = cfg.weights();
        Self {
            theta: DVector::zeros(NC),
            delta_theta: DVector::zeros(NC),
            gain: None,
            alpha: cfg.alpha,
            beta: cfg.beta,
            q,
            r,
            cap: cfg.theta_cap,
            j: 0,
            dare_failures: 0,
            clamp_events: 0,
        }
    }

    /// Recomputes the gain; on solver failure the previous gain is kept.
    pub fn refresh_gain(
        &mut self,
        a_bar: &DMatrix<f64>,
        b_bar: &DMatrix<f64>,
        tol: f64,
        max_iter: usize,
    ) -> Option<DareSolution> {
        match synthesize_gain(a_bar, b_bar, &self.q, &self.r, tol, max_iter) {
            Ok(sol) => {
                self.gain = Some(sol.gain.clone());
                Some(sol)
            }
            Err(e) => {
                self.dare_failures += 1;
                debug!("rotation {}: keeping previous gain ({e})", self.j);
                None
            }
        }
    }
}

/// `θ_{j+1} = αθ_j − βK[Ȳ_j; δθ_j; δȲ_j]`, clamped to the pitch cap.
/// Without a gain the feedback term is zero. Returns whether clamping occurred.
pub fn update_theta(
    cs: &mut ControllerState,
    y_bar: &DVector<f64>,
    delta_theta: &DVector<f64>,
    delta_y_bar: &DVector<f64>,
) -> bool {
    let mut next = &cs.theta * cs.alpha;
    if let Some(k) = &cs.gain {
        let n = y_bar.len();
        let mut s = DVector::zeros(2 * n + delta_theta.len());
        s.rows_mut(0, n).copy_from(y_bar);
        s.rows_mut(n, delta_theta.len()).copy_from(delta_theta);
        s.rows_mut(n + delta_theta.len(), n).copy_from(delta_y_bar);
        next -= k * s * cs.beta;
    }
    let mut clamped = false;
    for v in next.iter_mut() {
        if v.abs() > cs.cap {
            *v = v.signum() * cs.cap;
            clamped = true;
        }
    }
    if clamped {
        cs.clamp_events += 1;
        debug!("rotation {}: θ clamped to ±{}", cs.j, cs.cap);
    }
    cs.delta_theta = &next - &cs.theta;
    cs.theta = next;
    cs.j += 1;
    clamped
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RotationLog {
    pub j: usize,
    pub theta_norm: f64,
    pub delta_theta_norm: f64,
    /// NaN when the gain was not recomputed or the solver failed.
    pub dare_residual: f64,
    pub clamped: bool,
}

/// Fault-tolerant IPC: identification every sample, synthesis once per rotation.
#[derive(Debug, Clone)]
pub struct Ftipc {
    cfg: FtipcConfig,
    basis: BasisProjection,
    ident: Identifier,
    state: ControllerState,
    exc: ExcitationGenerator,
    uexc: Option<UnrestrictedExcitation>,
    eta: DVector<f64>,
    coef: DVector<f64>,
    dcoef: DVector<f64>,
    ybar_prev: DVector<f64>,
    ybuf: Vec<f64>,
    period: usize,
    log: Vec<RotationLog>,
}

impl Ftipc {
    pub fn new(cfg: FtipcConfig, period: usize, dt: f64, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let basis = build_basis(period, N_BLADES)?;
        let ident = Identifier::new(period, cfg.window, cfg.lambda)?;
        let mut exc = ExcitationGenerator::new(NC, cfg.excitation_cap, cfg.excitation_filter, seed);
        let uexc =
            cfg.unrestricted.as_ref().map(|u| unrestricted_excitation_mode(u.amplitude_deg, u.cutoff_hz, seed, dt));
        let eta = if uexc.is_some() { DVector::zeros(NC) } else { exc.next_sample() };
        let state = ControllerState::new(&cfg);
        let coef = &state.theta + &eta;
        Ok(Self {
            basis,
            ident,
            exc,
            uexc,
            dcoef: coef.clone(),
            coef,
            eta,
            state,
            ybar_prev: DVector::zeros(NC),
            ybuf: vec![0.0; N_BLADES * period],
            period,
            log: Vec::new(),
            cfg,
        })
    }

    pub fn with_defaults(seed: u64) -> Result<Self> {
        Self::new(FtipcConfig::default(), ROTOR_PERIOD, DT, seed)
    }

    pub fn state(&self) -> &ControllerState {
        &self.state
    }

    pub fn identifier(&self) -> &Identifier {
        &self.ident
    }

    pub fn basis(&self) -> &BasisProjection {
        &self.basis
    }

    pub fn rotation_log(&self) -> &[RotationLog] {
        &self.log
    }

    /// Current excitation coefficients η_j.
    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    /// Pitch command for sample `k` given the load measured at `k`.
    pub fn command(&mut self, k: usize, y: &[f64; N_BLADES]) -> Result<[f64; N_BLADES]> {
        let kk = k % self.period;
        self.ybuf[kk * N_BLADES..(kk + 1) * N_BLADES].copy_from_slice(y);
        let zero = DVector::zeros(NC);
        let base = pitch_command(&self.basis, &self.coef, &zero, kk);
        let mut u: [f64; N_BLADES] = std::array::from_fn(|i| base[i]);
        if let Some(ue) = self.uexc.as_mut() {
            let v = ue.next_sample();
            for i in 0..N_BLADES {
                u[i] += v[i];
            }
        }
        self.ident.record(&u, y)?;
        if kk == self.period - 1 {
            self.end_rotation()?;
        }
        Ok(u)
    }

    fn end_rotation(&mut self) -> Result<()> {
        let j = self.state.j;
        let ybar = project_output(&self.ybuf, &self.basis, N_BLADES)?;
        let dybar = &ybar - &self.ybar_prev;
        let mut residual = f64::NAN;
        let mut clamped = false;
        if j >= self.cfg.warmup_rotations {
            let xi = self.ident.estimate().assembled();
            match project_markov(&xi, self.cfg.window, &self.basis) {
                Ok((a_bar, b_bar)) => {
                    if let Some(sol) =
                        self.state.refresh_gain(&a_bar, &b_bar, self.cfg.dare_tol, self.cfg.dare_max_iter)
                    {
                        residual = sol.residual;
                    }
                }
                Err(e) => {
                    self.state.dare_failures += 1;
                    debug!("rotation {j}: projection failed ({e}), keeping previous gain");
                }
            }
            clamped = update_theta(&mut self.state, &ybar, &self.dcoef, &dybar);
        } else {
            self.state.delta_theta.fill(0.0);
            self.state.j += 1;
        }
        self.ybar_prev = ybar;
        if self.uexc.is_none() {
            self.eta = self.exc.next_sample();
        }
        let next = &self.state.theta + &self.eta;
        self.dcoef = &next - &self.coef;
        self.coef = next;
        self.log.push(RotationLog {
            j,
            theta_norm: self.state.theta.norm(),
            delta_theta_norm: self.state.delta_theta.norm(),
            dare_residual: residual,
            clamped,
        });
        Ok(())
    }
}
