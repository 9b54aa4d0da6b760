use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::N_BLADES;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn bit(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Coefficient-space excitation: one first-order filtered ±cap PRBS per
/// coefficient, each on its own ChaCha stream. Advanced once per rotation.
#[derive(Debug, Clone)]
pub struct ExcitationGenerator {
    streams: Vec<ChaCha8Rng>,
    state: DVector<f64>,
    cap: f64,
    filter: f64,
}

impl ExcitationGenerator {
    pub fn new(n: usize, cap: f64, filter: f64, seed: u64) -> Self {
        let filter = filter.clamp(0.0, 0.999);
        Self {
            streams: (0..n as u64).map(|i| stream(seed, i)).collect(),
            state: DVector::zeros(n),
            cap: cap.abs(),
            filter,
        }
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// η_j = a·η_{j−1} + (1 − a)·cap·b_j with b_j = ±1; |η_j| ≤ cap.
    pub fn next_sample(&mut self) -> DVector<f64> {
        let (a, cap) = (self.filter, self.cap);
        for (v, rng) in self.state.iter_mut().zip(self.streams.iter_mut()) {
            *v = a * *v + (1.0 - a) * cap * bit(rng);
        }
        self.state.clone()
    }
}

/// Per-sample low-pass PRBS added directly to each blade's pitch.
#[derive(Debug, Clone)]
pub struct UnrestrictedExcitation {
    streams: Vec<ChaCha8Rng>,
    state: [f64; N_BLADES],
    cap: f64,
    pole: f64,
}

/// Broadband pitch excitation capped at `amplitude_deg`, first-order low-pass
/// with corner `cutoff_hz` at sample interval `dt`.
pub fn unrestricted_excitation_mode(amplitude_deg: f64, cutoff_hz: f64, seed: u64, dt: f64) -> UnrestrictedExcitation {
    let pole = (-2.0 * std::f64::consts::PI * cutoff_hz.max(0.0) * dt).exp();
    UnrestrictedExcitation {
        // distinct stream ids from the coefficient-space generator
        streams: (0..N_BLADES as u64).map(|i| stream(seed, 1000 + i)).collect(),
        state: [0.0; N_BLADES],
        cap: amplitude_deg.abs(),
        pole,
    }
}

impl UnrestrictedExcitation {
    pub fn next_sample(&mut self) -> [f64; N_BLADES] {
        let (a, cap) = (self.pole, self.cap);
        for (v, rng) in self.state.iter_mut().zip(self.streams.iter_mut()) {
            *v = a * *v + (1.0 - a) * cap * bit(rng);
        }
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capped_and_deterministic() {
        let mut g = ExcitationGenerator::new(12, 0.1, 0.5, 9);
        let mut h = ExcitationGenerator::new(12, 0.1, 0.5, 9);
        for _ in 0..1000 {
            let a = g.next_sample();
            assert!(a.amax() <= 0.1 + 1e-15);
            assert_eq!(a, h.next_sample());
        }
    }

    #[test]
    fn streams_are_uncorrelated() {
        let mut g = ExcitationGenerator::new(12, 0.1, 0.5, 4);
        let n = 10_000;
        let xs: Vec<DVector<f64>> = (0..n).map(|_| g.next_sample()).collect();
        let corr = |i: usize, j: usize| {
            let mi = xs.iter().map(|x| x[i]).sum::<f64>() / n as f64;
            let mj = xs.iter().map(|x| x[j]).sum::<f64>() / n as f64;
            let (mut sij, mut sii, mut sjj) = (0.0, 0.0, 0.0);
            for x in &xs {
                sij += (x[i] - mi) * (x[j] - mj);
                sii += (x[i] - mi).powi(2);
                sjj += (x[j] - mj).powi(2);
            }
            sij / (sii * sjj).sqrt()
        };
        for i in 0..12 {
            for j in i + 1..12 {
                assert!(corr(i, j).abs() < 0.05, "streams {i},{j}");
            }
        }
    }

    #[test]
    fn unrestricted_cap_and_zero_amplitude() {
        let mut u = unrestricted_excitation_mode(0.25, 2.0, 1, 0.01);
        for _ in 0..10_000 {
            assert!(u.next_sample().iter().all(|v| v.abs() <= 0.25));
        }
        let mut z = unrestricted_excitation_mode(0.0, 2.0, 1, 0.01);
        assert!((0..100).all(|_| z.next_sample() == [0.0; 3]));
    }
}
