//! Real-space check on the spectral propagator.
//!
//! Builds the site-basis Hamiltonian as a dense matrix and integrates
//! `i dψ/dt = Hψ` with classical RK4. Nothing in here goes through a Fourier
//! transform, so a convention slip in [`crate::ring`] shows up as a
//! disagreement instead of cancelling out.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::{RingConfig, WavePacket};

pub const MAX_ORACLE_SITES: usize = 4096;
/// Default RK4 step, in units of `1/w`.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Largest allowed RK4 step, in units of `1/w`.
pub const MAX_STEP: f64 = 0.01;
pub const MAX_STEPS: f64 = 1e7;

/// Which neighbour carries `e^{-iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HoppingOrientation {
    /// `(Hψ)_j = -w e^{-iθ} ψ_{j+1} - w e^{+iθ} ψ_{j-1}`.
    #[default]
    Standard,
    /// Phase attached to the opposite bond direction (`θ → -θ`). Only useful
    /// for checking that validation catches it.
    Reversed,
}

/// Dense `N × N` site-basis Hamiltonian, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHamiltonian {
    n_sites: usize,
    half_bandwidth: f64,
    matrix: Vec<Complex64>,
}

pub fn build_hamiltonian(config: &RingConfig) -> Result<DenseHamiltonian> {
    build_hamiltonian_oriented(config, HoppingOrientation::Standard)
}

pub fn build_hamiltonian_oriented(
    config: &RingConfig,
    orientation: HoppingOrientation,
) -> Result<DenseHamiltonian> {
    let n = config.n_sites();
    if n > MAX_ORACLE_SITES {
        return Err(Error::OracleTooLarge(n));
    }
    let w = config.half_bandwidth();
    let theta = match orientation {
        HoppingOrientation::Standard => config.phase(),
        HoppingOrientation::Reversed => -config.phase(),
    };
    let forward = Complex64::from_polar(-w, -theta);
    let backward = forward.conj();
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        // Accumulate: on a two-site ring both bonds join the same pair.
        matrix[j * n + (j + 1) % n] += forward;
        matrix[j * n + (j + n - 1) % n] += backward;
    }
    Ok(DenseHamiltonian {
        n_sites: n,
        half_bandwidth: w,
        matrix,
    })
}

impl DenseHamiltonian {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn half_bandwidth(&self) -> f64 {
        self.half_bandwidth
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.n_sites + col]
    }

    /// Largest `|H_ij - conj(H_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n_sites;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Dense matrix-vector product.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .chunks_exact(self.n_sites)
            .map(|row| row.iter().zip(psi).map(|(h, x)| h * x).sum())
            .collect()
    }

    /// `max_j |(Hv)_j - E v_j|` for the plane wave `v_j = e^{iqj}`.
    pub fn plane_wave_residual(&self, q: f64, energy: f64) -> f64 {
        let v: Vec<Complex64> = (0..self.n_sites)
            .map(|j| Complex64::from_polar(1.0, q * j as f64))
            .collect();
        self.apply(&v)
            .iter()
            .zip(&v)
            .map(|(hv, x)| (hv - x * energy).norm())
            .fold(0.0, f64::max)
    }

    /// Ascending eigenvalues.
    ///
    /// `H = A + iB` is Hermitian, so the real symmetric embedding
    /// `[[A, -B], [B, A]]` has every eigenvalue of `H` exactly twice. The
    /// embedding is diagonalized by cyclic Jacobi rotations. Cost is
    /// `O(N³)` per sweep; intended for small rings.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n_sites;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let h = self.get(i, j);
                a[i * m + j] = h.re;
                a[(i + n) * m + j + n] = h.re;
                a[i * m + j + n] = -h.im;
                a[(i + n) * m + j] = h.im;
            }
        }
        jacobi_eigenvalues(&mut a, m);
        let mut all: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
        all.sort_by(f64::total_cmp);
        all.into_iter().step_by(2).collect()
    }
}

fn jacobi_eigenvalues(a: &mut [f64], m: usize) {
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off < 1e-30 {
            return;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

fn axpy(y: &[Complex64], a: Complex64, x: &[Complex64]) -> Vec<Complex64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// Classical RK4 integration of `i dψ/dt = Hψ` to time `t`.
///
/// Uses `ceil(|t|/dt)` equal steps, so the actual step never exceeds `dt`.
/// The state is never renormalized; norm drift is part of the error signal.
pub fn evolve_stepper(
    hamiltonian: &DenseHamiltonian,
    packet: &WavePacket,
    t: f64,
    dt: f64,
) -> Result<WavePacket> {
    if !t.is_finite() {
        return Err(Error::NonFiniteTime);
    }
    if packet.len() != hamiltonian.n_sites {
        return Err(Error::LengthMismatch {
            expected: hamiltonian.n_sites,
            found: packet.len(),
        });
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::StepSize("step must be positive"));
    }
    if dt > MAX_STEP / hamiltonian.half_bandwidth * (1.0 + 1e-12) {
        return Err(Error::StepSize("step exceeds 0.01/w"));
    }
    let steps = (t.abs() / dt).ceil();
    if steps > MAX_STEPS {
        return Err(Error::StepSize("more than 1e7 steps"));
    }
    let steps = steps as usize;
    let mut psi = packet.amplitudes().to_vec();
    if steps == 0 {
        return Ok(WavePacket::from_raw(psi));
    }
    let h = t / steps as f64;
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |x: &[Complex64]| -> Vec<Complex64> {
        hamiltonian
            .apply(x)
            .into_iter()
            .map(|v| minus_i * v)
            .collect()
    };
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = h / 6.0;
    for _ in 0..steps {
        let k1 = rhs(&psi);
        let k2 = rhs(&axpy(&psi, half, &k1));
        let k3 = rhs(&axpy(&psi, half, &k2));
        let k4 = rhs(&axpy(&psi, full, &k3));
        for (i, x) in psi.iter_mut().enumerate() {
            *x += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * sixth;
        }
    }
    Ok(WavePacket::from_raw(psi))
}
