use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::N_BLADES;

/// One-period-ahead predictor on lifted periodic differences:
///
/// ```text
/// δY_{j+1} = Γ̂K_u δU_j + Γ̂K_y δY_j + Ĥ δU_{j+1}
/// ```
///
/// Lifted vectors are sample-major (`t·n_blades + blade`).
#[derive(Debug, Clone)]
pub struct LiftedModel {
    pub gamma_ku: DMatrix<f64>,
    pub gamma_ky: DMatrix<f64>,
    pub h_hat: DMatrix<f64>,
    pub period: usize,
    pub window: usize,
}

impl LiftedModel {
    pub fn predict(&self, du_prev: &DVector<f64>, dy_prev: &DVector<f64>, du_next: &DVector<f64>) -> DVector<f64> {
        &self.gamma_ku * du_prev + &self.gamma_ky * dy_prev + &self.h_hat * du_next
    }
}

/// Splits a predictor row into `b_m = CÃ^m B`, `a_m = CÃ^m L` (m = 0 … p−1).
pub(crate) fn split_row(row: &[f64], p: usize) -> (Vec<f64>, Vec<f64>) {
    let b = (0..p).map(|m| row[p - 1 - m]).collect();
    let a = (0..p).map(|m| row[2 * p - 1 - m]).collect();
    (b, a)
}

/// Lag of sample `s` in the previous period as seen from sample `t` of the next.
fn cross_period_lag(t: usize, s: usize, period: usize) -> usize {
    t + period - 1 - s
}

/// Fills the right-hand side `[ΓK_u | ΓK_y | H̃]` (each `P × P`) for one blade.
fn blade_rhs(b: &[f64], a: &[f64], period: usize) -> DMatrix<f64> {
    let p = b.len();
    let mut rhs = DMatrix::zeros(period, 3 * period);
    for t in 0..period {
        // within-period Toeplitz, strictly lower, lags 0 … p−1
        for s in t.saturating_sub(p)..t {
            rhs[(t, 2 * period + s)] = b[t - 1 - s];
        }
        // previous-period contributions, only the trailing p samples matter
        for s in period.saturating_sub(p)..period {
            let m = cross_period_lag(t, s, period);
            if m < p {
                rhs[(t, s)] = b[m];
                rhs[(t, period + s)] = a[m];
            }
        }
    }
    rhs
}

/// Solves `(I − G̃) X = R` in place, with `G̃[t,s] = a_{t−1−s}` strictly lower and banded.
fn unit_lower_solve(a: &[f64], x: &mut DMatrix<f64>) -> Result<()> {
    let p = a.len();
    let scale = x.amax();
    for mut col in x.column_iter_mut() {
        for t in 0..col.len() {
            let mut acc = col[t];
            for s in t.saturating_sub(p)..t {
                acc += a[t - 1 - s] * col[s];
            }
            col[t] = acc;
        }
    }
    let grown = x.amax();
    if !grown.is_finite() || (scale > 0.0 && grown / scale > 1e12) {
        return Err(Error::IllConditioned { estimate: if scale > 0.0 { grown / scale } else { grown } });
    }
    Ok(())
}

/// `(Γ̂K_u, Γ̂K_y, Ĥ)` of a single blade, each `P × P`.
pub fn blade_lifted(row: &[f64], period: usize, p: usize) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    if row.len() != 2 * p {
        return Err(Error::Dimension(format!("Markov row has {} entries, expected {}", row.len(), 2 * p)));
    }
    if p > period {
        return Err(Error::InvalidParameter(format!("window {p} exceeds period {period}")));
    }
    if !row.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("Markov estimate"));
    }
    let (b, a) = split_row(row, p);
    let mut x = blade_rhs(&b, &a, period);
    unit_lower_solve(&a, &mut x)?;
    Ok((
        x.columns(0, period).into_owned(),
        x.columns(period, period).into_owned(),
        x.columns(2 * period, period).into_owned(),
    ))
}

/// Lifted predictor from the assembled per-blade rows (one row per blade).
/// Blades are independent, so the lifted matrices are blade-diagonal once
/// de-interleaved.
pub fn assemble_lifted(xi: &DMatrix<f64>, period: usize, p: usize) -> Result<LiftedModel> {
    let nb = xi.nrows();
    if nb != N_BLADES || xi.ncols() != 2 * p {
        return Err(Error::Dimension(format!("Ξ̂ is {:?}, expected ({N_BLADES}, {})", xi.shape(), 2 * p)));
    }
    let n = nb * period;
    let mut gamma_ku = DMatrix::zeros(n, n);
    let mut gamma_ky = DMatrix::zeros(n, n);
    let mut h_hat = DMatrix::zeros(n, n);
    for i in 0..nb {
        let row: Vec<f64> = xi.row(i).iter().copied().collect();
        let (gu, gy, h) = blade_lifted(&row, period, p)?;
        for t in 0..period {
            for s in 0..period {
                gamma_ku[(t * nb + i, s * nb + i)] = gu[(t, s)];
                gamma_ky[(t * nb + i, s * nb + i)] = gy[(t, s)];
                h_hat[(t * nb + i, s * nb + i)] = h[(t, s)];
            }
        }
    }
    Ok(LiftedModel { gamma_ku, gamma_ky, h_hat, period, window: p })
}

/// Projected blocks `(U_f⁺ Γ̂K_u U_f, U_f⁺ Γ̂K_y U_f, U_f⁺ Ĥ U_f)` of one blade,
/// computed without forming the `P × P` matrices.
pub(crate) fn blade_projected(
    row: &[f64],
    p: usize,
    uf: &DMatrix<f64>,
    uf_pinv: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let period = uf.nrows();
    if row.len() != 2 * p {
        return Err(Error::Dimension(format!("Markov row has {} entries, expected {}", row.len(), 2 * p)));
    }
    if !row.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("Markov estimate"));
    }
    let (b, a) = split_row(row, p);
    let rhs = blade_rhs(&b, &a, period);
    let nc = uf.ncols();
    let mut x = DMatrix::zeros(period, 3 * nc);
    for blk in 0..3 {
        let m = rhs.columns(blk * period, period) * uf;
        x.columns_mut(blk * nc, nc).copy_from(&m);
    }
    unit_lower_solve(&a, &mut x)?;
    let proj = uf_pinv * x;
    Ok((proj.columns(0, nc).into_owned(), proj.columns(nc, nc).into_owned(), proj.columns(2 * nc, nc).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rows_give_zero_model() {
        let m = assemble_lifted(&DMatrix::zeros(3, 42), 100, 21).unwrap();
        assert!(m.gamma_ku.iter().chain(m.gamma_ky.iter()).chain(m.h_hat.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn structure_of_lifted_blocks() {
        let row: Vec<f64> = (0..2 * 5).map(|i| 0.1 + 0.01 * i as f64).collect();
        let xi = DMatrix::from_fn(3, 10, |_, c| row[c]);
        let m = assemble_lifted(&xi, 20, 5).unwrap();
        let r = 3;
        // leading (P − p)·r columns of the past-input block vanish
        assert!(m.gamma_ku.columns(0, (20 - 5) * r).iter().all(|&v| v == 0.0));
        assert!(m.gamma_ky.columns(0, (20 - 5) * r).iter().all(|&v| v == 0.0));
        // Ĥ strictly block-lower-triangular
        for t in 0..20 {
            for s in t..20 {
                for i in 0..r {
                    for q in 0..r {
                        assert_eq!(m.h_hat[(t * r + i, s * r + q)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(blade_lifted(&[0.0; 5], 10, 3).is_err());
        assert!(blade_lifted(&[f64::NAN; 6], 10, 3).is_err());
    }
}
