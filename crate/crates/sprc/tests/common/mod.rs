#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sprc::plant::SurrogatePlant;

pub fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// `m × n` matrix of the given rank with singular values in [0.1, 10].
pub fn random_rank(rng: &mut ChaCha8Rng, m: usize, n: usize, rank: usize) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(m, n);
    }
    let u = gaussian(rng, m, rank).qr().q();
    let v = gaussian(rng, n, rank).qr().q();
    let s = DMatrix::from_diagonal(&DVector::from_fn(rank, |_, _| rng.random_range(0.1..10.0)));
    u * s * v.transpose()
}

/// Exponentially weighted normal equations with the `λᴺδI` prior.
pub fn batch_ls(zs: &[Vec<f64>], ts: &[Vec<f64>], lambda: f64, delta: f64) -> DMatrix<f64> {
    let n = zs[0].len();
    let m = ts[0].len();
    let big_n = zs.len();
    let mut phi = DMatrix::identity(n, n) * (delta * lambda.powi(big_n as i32));
    let mut b = DMatrix::zeros(n, m);
    for (k, (z, t)) in zs.iter().zip(ts).enumerate() {
        let w = lambda.powi((big_n - 1 - k) as i32);
        let zv = DVector::from_column_slice(z);
        let tv = DVector::from_column_slice(t);
        phi += &zv * zv.transpose() * w;
        b += &zv * tv.transpose() * w;
    }
    phi.lu().solve(&b).unwrap().transpose()
}

/// Explicit-inverse evaluation of the Riccati map, relative to ‖P‖.
pub fn riccati_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
    p: &DMatrix<f64>,
) -> f64 {
    let s_inv = (r + b.transpose() * p * b).try_inverse().unwrap();
    let ric = a.transpose() * p * a - a.transpose() * p * b * &s_inv * b.transpose() * p * a + q;
    (p - ric).norm() / p.norm()
}

/// Impulse response `C_i A_i^{j−1} B_i`, j = 1 … p, of blade `i`'s own channel.
pub fn siso_impulse_oracle(plant: &SurrogatePlant, blade: usize, p: usize) -> Vec<f64> {
    let (a, b, c, _) = plant.blade_channel_matrices(blade);
    let mut out = Vec::with_capacity(p);
    let mut x: DMatrix<f64> = b;
    for _ in 0..p {
        out.push((&c * &x)[(0, 0)]);
        x = &a * x;
    }
    out
}

/// Power of the 1P and 2P harmonics of one rotation of samples, by direct
/// correlation with sines and cosines (mean square of the fitted harmonics).
pub fn harmonic_power(rotation: &[f64]) -> f64 {
    let n = rotation.len() as f64;
    let mut total = 0.0;
    for h in [1.0, 2.0] {
        let (mut s, mut c) = (0.0, 0.0);
        for (k, v) in rotation.iter().enumerate() {
            let ph = TAU * h * k as f64 / n;
            s += v * ph.sin();
            c += v * ph.cos();
        }
        let (a, b) = (2.0 * s / n, 2.0 * c / n);
        total += 0.5 * (a * a + b * b);
    }
    total
}

/// Per-rotation 1P+2P power of each blade's load.
pub fn rotation_band_power(y: &[[f64; 3]], period: usize) -> Vec<[f64; 3]> {
    y.chunks_exact(period)
        .map(|rot| std::array::from_fn(|i| harmonic_power(&rot.iter().map(|v| v[i]).collect::<Vec<_>>())))
        .collect()
}

/// Trailing moving average over `w` rotations.
pub fn moving_average(x: &[f64], w: usize) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let lo = (j + 1).saturating_sub(w);
            x[lo..=j].iter().sum::<f64>() / (j + 1 - lo) as f64
        })
        .collect()
}
