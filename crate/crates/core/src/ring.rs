//! Ring geometry, initial packets, basis transforms and exact evolution.
//!
//! Momentum index `n = 0..N` labels `q = 2πn/N`. The transform pair is
//!
//! ```text
//! g̃_q = Σ_j g_j e^{-iqj}          (forward, unnormalized)
//! g_j = (1/N) Σ_q g̃_q e^{+iqj}     (inverse)
//! ```
//!
//! so that momentum mode `q` is the site-space plane wave `e^{iqj}`, whose
//! energy under the phased hopping is `ε_q(θ) = -2w cos(q - θ)`. Parseval reads
//! `(1/N) Σ_q |g̃_q|² = Σ_j |g_j|² = 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on unit norm for site and momentum amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Reduce an angle to `(-π, π]`.
pub fn reduce_phase(theta: f64) -> f64 {
    let mut r = theta % TAU;
    if r > PI {
        r -= TAU;
    } else if r <= -PI {
        r += TAU;
    }
    r
}

/// Static problem definition: `N` sites, half-bandwidth `w`, hopping phase `θ`.
///
/// The lattice constant is fixed to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig {
    n_sites: usize,
    half_bandwidth: f64,
    phase: f64,
}

impl RingConfig {
    pub fn new(n_sites: usize, half_bandwidth: f64, phase: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidConfig("ring needs at least 2 sites"));
        }
        if !(half_bandwidth.is_finite() && half_bandwidth > 0.0) {
            return Err(Error::InvalidConfig(
                "half-bandwidth must be positive and finite",
            ));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidConfig("phase must be finite"));
        }
        Ok(Self {
            n_sites,
            half_bandwidth,
            phase: reduce_phase(phase),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn half_bandwidth(&self) -> f64 {
        self.half_bandwidth
    }

    /// Hopping phase, reduced to `(-π, π]`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn with_phase(&self, phase: f64) -> Result<Self> {
        Self::new(self.n_sites, self.half_bandwidth, phase)
    }

    /// `q = 2πn/N` (unreduced).
    pub fn momentum(&self, n: usize) -> f64 {
        TAU * n as f64 / self.n_sites as f64
    }

    /// `q` mapped to `(-π, π]`, for reporting.
    pub fn reduced_momentum(&self, n: usize) -> f64 {
        reduce_phase(self.momentum(n))
    }

    /// Band energy `ε_q(θ) = -2w cos(q - θ)` of momentum index `n`.
    pub fn dispersion(&self, n: usize) -> Result<f64> {
        if n >= self.n_sites {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.n_sites,
            });
        }
        Ok(self.energy_unchecked(n))
    }

    fn energy_unchecked(&self, n: usize) -> f64 {
        -2.0 * self.half_bandwidth * (self.momentum(n) - self.phase).cos()
    }

    /// All band energies in ascending momentum index.
    pub fn energies(&self) -> Vec<f64> {
        (0..self.n_sites)
            .map(|n| self.energy_unchecked(n))
            .collect()
    }

    /// Signed ring coordinate of site `j`, in `[-⌊N/2⌋, ⌈N/2⌉)`.
    pub fn signed_offset(&self, j: usize) -> i64 {
        signed_offset(j % self.n_sites, self.n_sites)
    }

    /// Site index of a signed ring coordinate.
    pub fn site(&self, offset: i64) -> usize {
        offset.rem_euclid(self.n_sites as i64) as usize
    }
}

pub(crate) fn signed_offset(j: usize, n: usize) -> i64 {
    if j < n.div_ceil(2) {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Unit-norm site amplitudes `g_j`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    amplitudes: Vec<Complex64>,
}

impl WavePacket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidConfig("ring needs at least 2 sites"));
        }
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr = norm_sqr(&amplitudes);
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Self::new(amplitudes)
    }

    /// Wraps amplitudes whose norm is already right up to accumulated
    /// roundoff (evolved states, stepper output).
    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Rigid translation by `d` sites: `out_j = g_{j-d}`.
    pub fn translate(&self, d: i64) -> Self {
        let n = self.len() as i64;
        let amplitudes = (0..n)
            .map(|j| self.amplitudes[(j - d).rem_euclid(n) as usize])
            .collect();
        Self { amplitudes }
    }

    /// `⟨self|other⟩ = Σ_j conj(self_j) other_j`.
    pub fn overlap(&self, other: &WavePacket) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Momentum amplitudes `g̃_q`, indexed by `n` with `q = 2πn/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumAmplitudes {
    amplitudes: Vec<Complex64>,
}

impl MomentumAmplitudes {
    /// Checks `(1/N) Σ |g̃_q|² = 1`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidConfig("ring needs at least 2 sites"));
        }
        let norm_sqr = norm_sqr(&amplitudes) / amplitudes.len() as f64;
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `(1/N) Σ_q |g̃_q|²`.
    pub fn parseval_sum(&self) -> f64 {
        norm_sqr(&self.amplitudes) / self.len() as f64
    }

    /// Mean band energy `(1/N) Σ_q |g̃_q|² ε_q(θ)`.
    pub fn mean_energy(&self, config: &RingConfig) -> Result<f64> {
        check_len(config, self.len())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(config.energies())
            .map(|(a, e)| a.norm_sqr() * e)
            .sum::<f64>()
            / self.len() as f64)
    }
}

fn check_len(config: &RingConfig, len: usize) -> Result<()> {
    if len != config.n_sites() {
        return Err(Error::LengthMismatch {
            expected: config.n_sites(),
            found: len,
        });
    }
    Ok(())
}

/// Initial-condition families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preparation {
    /// `g_j = δ_{j,c}`.
    Atomic { center: usize },
    /// `g_j = 1/√(2M+1)` on the `2M+1` sites centered at `c`.
    Square { center: usize, half_width: usize },
    /// `g_j ∝ exp(-(j-c)²/(4σ²))`, so `|g_j|²` has standard deviation `σ`.
    Gaussian { center: usize, width: f64 },
}

impl Preparation {
    pub fn center(&self) -> usize {
        match *self {
            Preparation::Atomic { center }
            | Preparation::Square { center, .. }
            | Preparation::Gaussian { center, .. } => center,
        }
    }

    /// Number of sites the packet extends beyond its center; for a Gaussian,
    /// three standard deviations.
    pub fn half_extent(&self) -> usize {
        match *self {
            Preparation::Atomic { .. } => 0,
            Preparation::Square { half_width, .. } => half_width,
            Preparation::Gaussian { width, .. } => (3.0 * width).ceil() as usize,
        }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        let center = self.center();
        if center >= n_sites {
            return Err(Error::IndexOutOfRange {
                index: center,
                len: n_sites,
            });
        }
        match *self {
            Preparation::Atomic { .. } => Ok(()),
            Preparation::Square { half_width, .. } => {
                if half_width
                    .checked_mul(2)
                    .and_then(|w| w.checked_add(1))
                    .is_none_or(|lambda| lambda > n_sites)
                {
                    return Err(Error::PacketTooWide);
                }
                Ok(())
            }
            Preparation::Gaussian { width, .. } => {
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::InvalidConfig("gaussian width must be positive"));
                }
                if width >= n_sites as f64 / 4.0 {
                    return Err(Error::PacketTooWide);
                }
                Ok(())
            }
        }
    }
}

/// Build the initial packet on the ring.
pub fn prepare(config: &RingConfig, prep: &Preparation) -> Result<WavePacket> {
    let n = config.n_sites();
    prep.validate(n)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
    match *prep {
        Preparation::Atomic { center } => {
            amplitudes[center] = Complex64::new(1.0, 0.0);
            WavePacket::new(amplitudes)
        }
        Preparation::Square { center, half_width } => {
            let lambda = 2 * half_width + 1;
            let value = Complex64::new(1.0 / (lambda as f64).sqrt(), 0.0);
            let m = half_width as i64;
            for offset in -m..=m {
                amplitudes[config.site(center as i64 + offset)] = value;
            }
            WavePacket::new(amplitudes)
        }
        Preparation::Gaussian { center, width } => {
            for (j, a) in amplitudes.iter_mut().enumerate() {
                let x = signed_offset((j + n - center) % n, n) as f64;
                *a = Complex64::new((-x * x / (4.0 * width * width)).exp(), 0.0);
            }
            WavePacket::normalized(amplitudes)
        }
    }
}

/// A discrete Fourier transform pair under the crate's sign convention.
///
/// Implementations must sum in ascending index order so results are
/// reproducible bit for bit.
pub trait SpectralTransform {
    /// `g̃_n = Σ_j g_j e^{-2πinj/N}`.
    fn forward(&self, site: &[Complex64]) -> Vec<Complex64>;
    /// `g_j = (1/N) Σ_n g̃_n e^{+2πinj/N}`.
    fn inverse(&self, momentum: &[Complex64]) -> Vec<Complex64>;
}

/// Direct `O(N²)` transform with an exactly reduced twiddle index.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectDft;

impl DirectDft {
    fn twiddles(n: usize, sign: f64) -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::from_polar(1.0, sign * TAU * k as f64 / n as f64))
            .collect()
    }

    fn transform(input: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = input.len();
        let table = Self::twiddles(n, sign);
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut idx = 0usize;
                for x in input {
                    acc += x * table[idx];
                    idx += k;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc
            })
            .collect()
    }
}

impl SpectralTransform for DirectDft {
    fn forward(&self, site: &[Complex64]) -> Vec<Complex64> {
        Self::transform(site, -1.0)
    }

    fn inverse(&self, momentum: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / momentum.len() as f64;
        let mut out = Self::transform(momentum, 1.0);
        out.iter_mut().for_each(|a| *a *= scale);
        out
    }
}

pub fn to_momentum(packet: &WavePacket) -> MomentumAmplitudes {
    to_momentum_with(&DirectDft, packet)
}

pub fn to_momentum_with<T: SpectralTransform + ?Sized>(
    transform: &T,
    packet: &WavePacket,
) -> MomentumAmplitudes {
    MomentumAmplitudes::from_raw(transform.forward(packet.amplitudes()))
}

pub fn from_momentum(spectrum: &MomentumAmplitudes) -> WavePacket {
    from_momentum_with(&DirectDft, spectrum)
}

pub fn from_momentum_with<T: SpectralTransform + ?Sized>(
    transform: &T,
    spectrum: &MomentumAmplitudes,
) -> WavePacket {
    WavePacket::from_raw(transform.inverse(spectrum.amplitudes()))
}

/// Closed-form transform of a centered square packet of odd width `λ`:
/// `(1/√λ) sin(λq/2) / sin(q/2)`, equal to `√λ` at `q = 0`.
pub fn square_form_factor(lambda: usize, q: f64) -> Result<f64> {
    if lambda == 0 || lambda.is_multiple_of(2) {
        return Err(Error::EvenWidth(lambda));
    }
    if !q.is_finite() {
        return Err(Error::Domain("momentum must be finite"));
    }
    let l = lambda as f64;
    let half = 0.5 * q;
    let denom = half.sin();
    if denom.abs() < 1e-6 {
        // Dirichlet-kernel sum; avoids 0/0 at multiples of 2π.
        let m = (lambda / 2) as i64;
        let sum: f64 = (-m..=m).map(|j| (q * j as f64).cos()).sum();
        return Ok(sum / l.sqrt());
    }
    Ok((l * half).sin() / denom / l.sqrt())
}

/// Precomputed spectral data of one initial packet, reused across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: MomentumAmplitudes,
    energies: Vec<f64>,
}

impl Propagator {
    pub fn new(config: &RingConfig, packet: &WavePacket) -> Result<Self> {
        Self::with_transform(&DirectDft, config, packet)
    }

    pub fn with_transform<T: SpectralTransform + ?Sized>(
        transform: &T,
        config: &RingConfig,
        packet: &WavePacket,
    ) -> Result<Self> {
        check_len(config, packet.len())?;
        Ok(Self {
            spectrum: to_momentum_with(transform, packet),
            energies: config.energies(),
        })
    }

    pub fn spectrum(&self) -> &MomentumAmplitudes {
        &self.spectrum
    }

    pub fn state_at(&self, t: f64) -> Result<WavePacket> {
        self.state_at_with(&DirectDft, t)
    }

    /// `from_momentum(g̃_q e^{-iε_q t})`.
    pub fn state_at_with<T: SpectralTransform + ?Sized>(
        &self,
        transform: &T,
        t: f64,
    ) -> Result<WavePacket> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime);
        }
        let rotated: Vec<Complex64> = self
            .spectrum
            .amplitudes()
            .iter()
            .zip(&self.energies)
            .map(|(a, e)| a * Complex64::from_polar(1.0, -e * t))
            .collect();
        Ok(WavePacket::from_raw(transform.inverse(&rotated)))
    }
}

/// Exact evolution of `packet` to time `t` (negative `t` runs backwards).
pub fn evolve(config: &RingConfig, packet: &WavePacket, t: f64) -> Result<WavePacket> {
    Propagator::new(config, packet)?.state_at(t)
}

pub fn evolve_with<T: SpectralTransform + ?Sized>(
    transform: &T,
    config: &RingConfig,
    packet: &WavePacket,
    t: f64,
) -> Result<WavePacket> {
    Propagator::with_transform(transform, config, packet)?.state_at_with(transform, t)
}
