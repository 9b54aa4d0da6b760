use nalgebra::DMatrix;

/// Relative cutoff per dimension used by [`pinv_default`].
pub const PINV_RTOL: f64 = 1e-12;

/// Moore–Penrose pseudo-inverse via SVD. Singular values below `tol·σ_max`
/// are treated as zero.
///
/// The SVD comes from faer: nalgebra's bidiagonal SVD occasionally returns a
/// wrong factorisation for exactly rank-deficient inputs.
pub fn pinv(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 || !m.iter().all(|v| v.is_finite()) {
        return DMatrix::zeros(cols, rows);
    }
    let f = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let Ok(svd) = f.thin_svd() else {
        return DMatrix::zeros(cols, rows);
    };
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let k = rows.min(cols);
    let s_max = (0..k).map(|i| s[i]).fold(0.0, f64::max);
    if s_max == 0.0 {
        return DMatrix::zeros(cols, rows);
    }
    let cut = tol * s_max;
    let kept: Vec<usize> = (0..k).filter(|&i| s[i] > cut).collect();
    // out = V_k S_k⁻¹ U_kᵀ
    let vs = DMatrix::from_fn(cols, kept.len(), |j, c| v[(j, kept[c])] / s[kept[c]]);
    let ut = DMatrix::from_fn(kept.len(), rows, |c, i| u[(i, kept[c])]);
    vs * ut
}

/// [`pinv`] with cutoff `1e-12 · max(rows, cols) · σ_max`.
pub fn pinv_default(m: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = m.nrows().max(m.ncols()) as f64;
    pinv(m, PINV_RTOL * dim)
}
