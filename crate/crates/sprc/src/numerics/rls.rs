use nalgebra::DMatrix;

use crate::error::{ensure_finite, Error, Result};

/// Default prior information weight: the square-root factor starts at `sqrt(RLS_DELTA)·I`.
pub const RLS_DELTA: f64 = 1e-3;

/// Exponentially weighted least squares in square-root information form.
///
/// `sqrt_inv_cov` is an upper-triangular `S` with `SᵀS = λᴺδI + Σ λᴺ⁻ⁱ zᵢzᵢᵀ`.
/// `rhs` holds `S⁻ᵀ Σ λᴺ⁻ⁱ zᵢtᵢᵀ`, so the estimate solves `S Ξᵀ = rhs`.
/// Each update appends the new data row and re-triangularises with Givens
/// rotations; the covariance itself is never formed.
#[derive(Debug, Clone)]
pub struct RlsState {
    estimate: DMatrix<f64>,
    sqrt_inv_cov: DMatrix<f64>,
    rhs: DMatrix<f64>,
    lambda: f64,
    // scratch row [zᵀ | tᵀ] reused across updates
    work: Vec<f64>,
}

impl RlsState {
    pub fn new(n_out: usize, n_reg: usize, lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda > 0.9 && lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!("forgetting factor must lie in (0.9, 1], got {lambda}")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("prior weight must be positive, got {delta}")));
        }
        if n_out == 0 || n_reg == 0 {
            return Err(Error::Dimension("RLS needs at least one regressor and one target".into()));
        }
        Ok(Self {
            estimate: DMatrix::zeros(n_out, n_reg),
            sqrt_inv_cov: DMatrix::identity(n_reg, n_reg) * delta.sqrt(),
            rhs: DMatrix::zeros(n_reg, n_out),
            lambda,
            work: vec![0.0; n_reg + n_out],
        })
    }

    pub fn n_out(&self) -> usize {
        self.estimate.nrows()
    }

    pub fn n_reg(&self) -> usize {
        self.estimate.ncols()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Current estimate, `n_out × n_reg`.
    pub fn estimate(&self) -> &DMatrix<f64> {
        &self.estimate
    }

    pub fn sqrt_inv_cov(&self) -> &DMatrix<f64> {
        &self.sqrt_inv_cov
    }

    pub fn update(&mut self, regressor: &[f64], target: &[f64]) -> Result<()> {
        let n = self.n_reg();
        let m = self.n_out();
        if regressor.len() != n {
            return Err(Error::Dimension(format!("regressor length {} != {}", regressor.len(), n)));
        }
        if target.len() != m {
            return Err(Error::Dimension(format!("target length {} != {}", target.len(), m)));
        }
        ensure_finite(regressor, "RLS regressor")?;
        ensure_finite(target, "RLS target")?;

        let sl = self.lambda.sqrt();
        if sl != 1.0 {
            self.sqrt_inv_cov.scale_mut(sl);
            self.rhs.scale_mut(sl);
        }
        self.work[..n].copy_from_slice(regressor);
        self.work[n..].copy_from_slice(target);

        let s = &mut self.sqrt_inv_cov;
        let g = &mut self.rhs;
        let w = &mut self.work;
        for j in 0..n {
            let b = w[j];
            if b == 0.0 {
                continue;
            }
            let a = s[(j, j)];
            let r = a.hypot(b);
            let (c, sn) = (a / r, b / r);
            s[(j, j)] = r;
            w[j] = 0.0;
            for col in j + 1..n {
                let (x, y) = (s[(j, col)], w[col]);
                s[(j, col)] = c * x + sn * y;
                w[col] = c * y - sn * x;
            }
            for col in 0..m {
                let (x, y) = (g[(j, col)], w[n + col]);
                g[(j, col)] = c * x + sn * y;
                w[n + col] = c * y - sn * x;
            }
        }

        // Back substitution S Ξᵀ = rhs, one target column at a time.
        for col in 0..m {
            for i in (0..n).rev() {
                let mut acc = g[(i, col)];
                for k in i + 1..n {
                    acc -= s[(i, k)] * self.estimate[(col, k)];
                }
                self.estimate[(col, i)] = acc / s[(i, i)];
            }
        }
        if !self.estimate.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("RLS estimate"));
        }
        Ok(())
    }
}

/// Functional form of [`RlsState::update`]: consumes the state and hands back the
/// updated state together with a copy of the new estimate.
pub fn rls_update(mut state: RlsState, regressor: &[f64], target: &[f64]) -> Result<(RlsState, DMatrix<f64>)> {
    state.update(regressor, target)?;
    let est = state.estimate.clone();
    Ok((state, est))
}
