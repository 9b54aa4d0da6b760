use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const DARE_TOL: f64 = 1e-9;
pub const DARE_MAX_ITER: usize = 500;

#[derive(Debug, Clone)]
pub struct DareSolution {
    pub cost_matrix: DMatrix<f64>,
    pub gain: DMatrix<f64>,
    /// ‖P − Ric(P)‖_F / ‖P‖_F
    pub residual: f64,
    /// Equivalent number of Riccati difference steps taken from P₀ = Q.
    pub iterations: usize,
}

fn riccati_map(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p: &DMatrix<f64>,
) -> Option<DMatrix<f64>> {
    let pa = p * a;
    let bt_pa = b.transpose() * &pa;
    let s = r + b.transpose() * p * b;
    let k = s.cholesky()?.solve(&bt_pa);
    let next = a.transpose() * pa - bt_pa.transpose() * k + q;
    Some((&next + next.transpose()) * 0.5)
}

/// Relative residual of the discrete algebraic Riccati equation at `p`.
pub fn riccati_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p: &DMatrix<f64>,
) -> f64 {
    match riccati_map(a, b, q, r, p) {
        Some(next) => {
            let diff = (p - next).norm();
            let scale = p.norm();
            if scale > 0.0 {
                diff / scale
            } else {
                diff
            }
        }
        None => f64::INFINITY,
    }
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if !m.iter().all(|v| v.is_finite()) {
        return f64::INFINITY;
    }
    // the default Schur iteration has no cap and can stall on defective matrices
    match m.clone().try_schur(f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max),
        None => gelfand_radius(m),
    }
}

/// ‖M^(2^k)‖^(1/2^k) with per-step normalisation; converges to ρ(M) from above.
fn gelfand_radius(m: &DMatrix<f64>) -> f64 {
    let mut x = m.clone();
    let mut log_scale = 0.0;
    let mut est = x.norm();
    for k in 1..=30 {
        x = &x * &x;
        log_scale *= 2.0;
        let nrm = x.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        x /= nrm;
        log_scale += nrm.ln();
        est = (log_scale / 2f64.powi(k)).exp();
    }
    est
}

/// Solves `P = AᵀPA − AᵀPB(R+BᵀPB)⁻¹BᵀPA + Q`.
///
/// The Riccati difference recursion started at `P₀ = Q` is advanced by
/// doubling: after `i` doublings `H` equals the iterate `P_{2ⁱ−1}` of the plain
/// recursion, so `max_iter` keeps its meaning as a step budget while the cost
/// is logarithmic in it. Plain steps finish off what rounding leaves behind.
pub fn solve_dare(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<DareSolution> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || q.shape() != (n, n) || r.nrows() != b.ncols() || r.ncols() != b.ncols() {
        return Err(Error::Dimension(format!(
            "DARE shapes A {:?}, B {:?}, Q {:?}, R {:?}",
            a.shape(),
            b.shape(),
            q.shape(),
            r.shape()
        )));
    }
    for (m, what) in [(a, "DARE A"), (b, "DARE B"), (q, "DARE Q"), (r, "DARE R")] {
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite(what));
        }
    }
    let r_chol = r.clone().cholesky().ok_or_else(|| Error::InvalidParameter("R must be positive definite".into()))?;

    let mut ak = a.clone();
    let mut gk = b * r_chol.solve(&b.transpose());
    gk = (&gk + gk.transpose()) * 0.5;
    let mut hk = q.clone();
    let eye = DMatrix::<f64>::identity(n, n);

    let mut steps = 0usize;
    let mut residual = riccati_residual(a, b, q, r, &hk);
    // once A_k has vanished further doublings leave H unchanged
    while residual > tol && 2 * steps < max_iter && ak.amax() > 1e-14 {
        let w = (&eye + &gk * &hk).lu();
        let wa = w.solve(&ak).ok_or(Error::NonFinite("DARE doubling step"))?;
        let wg = w.solve(&gk).ok_or(Error::NonFinite("DARE doubling step"))?;
        let h_next = &hk + ak.transpose() * &hk * &wa;
        let g_next = &gk + &ak * wg * ak.transpose();
        ak = &ak * wa;
        hk = (&h_next + h_next.transpose()) * 0.5;
        gk = (&g_next + g_next.transpose()) * 0.5;
        steps = 2 * steps + 1;
        if !hk.iter().all(|v| v.is_finite()) {
            return Err(Error::DareNotConverged { iterations: steps, residual: f64::INFINITY });
        }
        residual = riccati_residual(a, b, q, r, &hk);
    }
    // Doubling loses a few digits when R is small relative to BᵀPB; plain
    // Riccati steps from its result restore them.
    let mut polish = 0;
    while residual > tol && steps + polish < max_iter {
        match riccati_map(a, b, q, r, &hk) {
            Some(next) => hk = next,
            None => break,
        }
        polish += 1;
        residual = riccati_residual(a, b, q, r, &hk);
    }
    if residual > tol {
        return Err(Error::DareNotConverged { iterations: steps + polish, residual });
    }

    let p = hk;
    let s = r + b.transpose() * &p * b;
    let gain = s.cholesky().ok_or(Error::NonFinite("DARE gain"))?.solve(&(b.transpose() * &p * a));
    let radius = spectral_radius(&(a - b * &gain));
    if radius >= 1.0 {
        return Err(Error::DareNotStabilizing { radius });
    }
    Ok(DareSolution { cost_matrix: p, gain, residual, iterations: steps + polish })
}
