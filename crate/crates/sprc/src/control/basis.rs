use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::pinv_default;

/// Coefficients per blade: sin ψ, cos ψ, sin 2ψ, cos 2ψ.
pub const N_COEFFS: usize = 4;

/// `φ = U_f ⊗ I_r`; coefficient vectors are indexed `c·r + blade`, lifted
/// signals `t·r + blade`.
#[derive(Debug, Clone)]
pub struct BasisProjection {
    pub uf: DMatrix<f64>,
    pub uf_pinv: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    pub phi_pinv: DMatrix<f64>,
    pub period: usize,
    pub r: usize,
}

/// Rows of `U_f` are evaluated at ψ_k = 2πk/P for k = 1 … P.
pub fn build_basis(period: usize, r: usize) -> Result<BasisProjection> {
    if period < 8 {
        return Err(Error::InvalidParameter(format!("period {period} too short to resolve 2P (need >= 8)")));
    }
    let uf = DMatrix::from_fn(period, N_COEFFS, |k, c| {
        let psi = 2.0 * PI * (k + 1) as f64 / period as f64;
        match c {
            0 => psi.sin(),
            1 => psi.cos(),
            2 => (2.0 * psi).sin(),
            _ => (2.0 * psi).cos(),
        }
    });
    let uf_pinv = pinv_default(&uf);
    let phi = uf.kronecker(&DMatrix::<f64>::identity(r, r));
    let phi_pinv = pinv_default(&phi);
    Ok(BasisProjection { uf, uf_pinv, phi, phi_pinv, period, r })
}

/// Pitch at row `kk` of the rotation: `row_kk(φ)·(θ + η)`.
pub fn pitch_command(basis: &BasisProjection, theta: &DVector<f64>, eta: &DVector<f64>, kk: usize) -> Vec<f64> {
    let r = basis.r;
    let row = basis.uf.row(kk % basis.period);
    (0..r).map(|i| (0..N_COEFFS).map(|c| row[c] * (theta[c * r + i] + eta[c * r + i])).sum()).collect()
}

/// `Ȳ = (U_f ⊗ I_l)⁺ Y` for one rotation of loads stored sample-major.
pub fn project_output(y_period: &[f64], basis: &BasisProjection, l: usize) -> Result<DVector<f64>> {
    let p = basis.period;
    if y_period.len() != l * p {
        return Err(Error::Dimension(format!("rotation has {} samples, expected {}", y_period.len(), l * p)));
    }
    let mut out = DVector::zeros(N_COEFFS * l);
    for c in 0..N_COEFFS {
        for t in 0..p {
            let w = basis.uf_pinv[(c, t)];
            for i in 0..l {
                out[c * l + i] += w * y_period[t * l + i];
            }
        }
    }
    Ok(out)
}
