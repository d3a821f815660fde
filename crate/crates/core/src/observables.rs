//! Transfer amplitude, fidelity, occupation profiles and peak extraction.
//!
//! The receiver state `|ψ_d⟩` is the initial packet rigidly translated by `d`
//! sites, which gives
//!
//! ```text
//! f_d(t) = ⟨ψ_d|ψ_0(t)⟩ = (1/N) Σ_q |g̃_q|² e^{i(qd - ε_q(θ) t)},   F_d(t) = |f_d(t)|².
//! ```

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::{prepare, signed_offset, to_momentum, Preparation, RingConfig, WavePacket};

/// Samples at or below this fidelity never count as a local maximum.
pub const PEAK_NOISE_FLOOR: f64 = 1e-6;
/// Default sampling step, in units of `1/w`.
pub const DEFAULT_DT: f64 = 0.05;
/// Golden-section refinement stops once the bracket is this narrow.
pub const REFINE_TOLERANCE: f64 = 1e-9;

/// `P_j = |g_j|²`.
pub fn probability_distribution(packet: &WavePacket) -> Vec<f64> {
    packet.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

fn check_receiver(config: &RingConfig, d: i64) -> Result<()> {
    if 2 * d.unsigned_abs() as u128 >= config.n_sites() as u128 {
        return Err(Error::ReceiverOutOfRange {
            receiver: d,
            n_sites: config.n_sites(),
        });
    }
    Ok(())
}

/// Momentum-space data of `f_d(t)` for one `(config, prep, d)`; evaluating
/// at a new time costs `N` complex exponentials.
#[derive(Debug, Clone)]
pub struct TransferKernel {
    weights: Vec<Complex64>,
    energies: Vec<f64>,
    receiver: i64,
}

impl TransferKernel {
    pub fn new(config: &RingConfig, prep: &Preparation, d: i64) -> Result<Self> {
        Self::from_packet(config, &prepare(config, prep)?, d)
    }

    /// Kernel for an arbitrary initial packet, with the receiver state being
    /// that packet translated by `d`.
    pub fn from_packet(config: &RingConfig, packet: &WavePacket, d: i64) -> Result<Self> {
        check_receiver(config, d)?;
        if packet.len() != config.n_sites() {
            return Err(Error::LengthMismatch {
                expected: config.n_sites(),
                found: packet.len(),
            });
        }
        let spectrum = to_momentum(packet);
        let n = config.n_sites();
        let shift = d.rem_euclid(n as i64) as usize;
        let weights = spectrum
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let idx = (k * shift) % n;
                Complex64::from_polar(a.norm_sqr() / n as f64, TAU * idx as f64 / n as f64)
            })
            .collect();
        Ok(Self {
            weights,
            energies: config.energies(),
            receiver: d,
        })
    }

    pub fn receiver(&self) -> i64 {
        self.receiver
    }

    /// `f_d(t)`, summed in ascending momentum index.
    pub fn amplitude(&self, t: f64) -> Result<Complex64> {
        if !t.is_finite() {
            return Err(Error::NonFiniteTime);
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.energies)
            .map(|(c, e)| c * Complex64::from_polar(1.0, -e * t))
            .sum())
    }

    pub fn fidelity(&self, t: f64) -> Result<f64> {
        Ok(self.amplitude(t)?.norm_sqr())
    }
}

pub fn transfer_amplitude(
    config: &RingConfig,
    prep: &Preparation,
    d: i64,
    t: f64,
) -> Result<Complex64> {
    TransferKernel::new(config, prep, d)?.amplitude(t)
}

pub fn fidelity(config: &RingConfig, prep: &Preparation, d: i64, t: f64) -> Result<f64> {
    Ok(transfer_amplitude(config, prep, d, t)?.norm_sqr())
}

/// Latest time before the fastest components (group speed `2w`) could wrap
/// around the ring and reach the receiver from the far side:
/// `(N/2 - |d| - half_extent) / (2w)`, floored at zero.
pub fn no_wrap_horizon(config: &RingConfig, prep: &Preparation, d: i64) -> f64 {
    let room = config.n_sites() as f64 / 2.0 - d.unsigned_abs() as f64 - prep.half_extent() as f64;
    (room / (2.0 * config.half_bandwidth())).max(0.0)
}

/// Whether sampling past the no-wrap horizon is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Horizon {
    #[default]
    Enforce,
    AllowWrap,
}

/// Uniform grid `0, dt, 2dt, …` up to and including `t_max` (within roundoff).
pub fn uniform_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidGrid("time step must be positive"));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::InvalidGrid("window end must be non-negative"));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// Sampled `F_d(t)` together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub receiver: i64,
    pub config: RingConfig,
    pub preparation: Preparation,
}

impl FidelitySeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid"));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFiniteTime);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("times must be strictly increasing"));
    }
    Ok(())
}

pub fn fidelity_series(
    config: &RingConfig,
    prep: &Preparation,
    d: i64,
    times: &[f64],
    horizon: Horizon,
) -> Result<FidelitySeries> {
    check_grid(times)?;
    let kernel = TransferKernel::new(config, prep, d)?;
    if horizon == Horizon::Enforce {
        let limit = no_wrap_horizon(config, prep, d);
        let last = times[times.len() - 1];
        if last > limit + 1e-9 {
            return Err(Error::HorizonExceeded {
                t: last,
                horizon: limit,
            });
        }
    }
    let values = times
        .iter()
        .map(|&t| kernel.fidelity(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelitySeries {
        times: times.to_vec(),
        values,
        receiver: d,
        config: *config,
        preparation: *prep,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeakRule {
    /// Earliest local maximum: the transfer time used for readout.
    #[default]
    FirstLocal,
    /// Largest value in the sampled window.
    GlobalInWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakKind {
    FirstLocalMax,
    GlobalInWindow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakResult {
    pub t_star: f64,
    pub f_star: f64,
    pub kind: PeakKind,
    /// Index of the bracketing sample in the series.
    pub sample: usize,
}

/// Vertex of the parabola through three samples, clamped to their span.
fn parabolic_vertex(t: [f64; 3], f: [f64; 3]) -> (f64, f64) {
    let (x0, x2) = (t[0] - t[1], t[2] - t[1]);
    let (y0, y2) = (f[0] - f[1], f[2] - f[1]);
    let det = x0 * x2 * (x0 - x2);
    let a = (y0 * x2 - y2 * x0) / det;
    let b = (y2 * x0 * x0 - y0 * x2 * x2) / det;
    if a.is_nan() || a >= 0.0 {
        return (t[1], f[1]);
    }
    let x = (-b / (2.0 * a)).clamp(x0, x2);
    (t[1] + x, f[1] + x * (b + a * x))
}

fn refined_sample(series: &FidelitySeries, i: usize, kind: PeakKind) -> PeakResult {
    let interior = i > 0 && i + 1 < series.len();
    let (t_star, f_star) = if interior {
        parabolic_vertex(
            [series.times[i - 1], series.times[i], series.times[i + 1]],
            [series.values[i - 1], series.values[i], series.values[i + 1]],
        )
    } else {
        (series.times[i], series.values[i])
    };
    PeakResult {
        t_star,
        f_star,
        kind,
        sample: i,
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Largest sample, parabolically refined when it is interior.
pub fn global_peak(series: &FidelitySeries) -> Result<PeakResult> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort(series.len()));
    }
    Ok(refined_sample(
        series,
        argmax(&series.values),
        PeakKind::GlobalInWindow,
    ))
}

/// First interior sample exceeding both neighbours and the noise floor,
/// parabolically refined.
///
/// A series whose leading sample is already its largest value (the `d = 0`
/// case, or any strictly decreasing series) reports that sample as a
/// global-in-window peak. If no interior local maximum exists, the global
/// maximum is returned.
pub fn first_peak(series: &FidelitySeries) -> Result<PeakResult> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort(series.len()));
    }
    let v = &series.values;
    if argmax(v) == 0 {
        return Ok(refined_sample(series, 0, PeakKind::GlobalInWindow));
    }
    let first =
        (1..v.len() - 1).find(|&i| v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > PEAK_NOISE_FLOOR);
    match first {
        Some(i) => Ok(refined_sample(series, i, PeakKind::FirstLocalMax)),
        None => global_peak(series),
    }
}

pub fn find_peak(series: &FidelitySeries, rule: PeakRule) -> Result<PeakResult> {
    match rule {
        PeakRule::FirstLocal => first_peak(series),
        PeakRule::GlobalInWindow => global_peak(series),
    }
}

/// Golden-section maximization of the exact fidelity on `[lo, hi]`.
fn golden_max(kernel: &TransferKernel, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = kernel.fidelity(x1)?;
    let mut f2 = kernel.fidelity(x2)?;
    while hi - lo > REFINE_TOLERANCE {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = kernel.fidelity(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = kernel.fidelity(x1)?;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((t, kernel.fidelity(t)?))
}

/// Sampling window for peak searches. `t_max = None` means "up to the
/// no-wrap horizon of each receiver".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t_max: Option<f64>,
    pub dt: f64,
}

impl TimeWindow {
    /// Horizon-limited window with `dt = 0.05/w`.
    pub fn default_for(config: &RingConfig) -> Self {
        Self {
            t_max: None,
            dt: DEFAULT_DT / config.half_bandwidth(),
        }
    }

    pub fn end(&self, config: &RingConfig, prep: &Preparation, d: i64) -> f64 {
        self.t_max
            .unwrap_or_else(|| no_wrap_horizon(config, prep, d))
    }

    pub fn grid(&self, config: &RingConfig, prep: &Preparation, d: i64) -> Result<Vec<f64>> {
        uniform_grid(self.end(config, prep, d), self.dt)
    }
}

/// Sample `F_d(t)` over the window, pick a peak by `rule`, then polish an
/// interior peak by golden-section search on the exact fidelity so that
/// `f_star = F_d(t_star)`.
pub fn locate_peak(
    config: &RingConfig,
    prep: &Preparation,
    d: i64,
    window: &TimeWindow,
    rule: PeakRule,
    horizon: Horizon,
) -> Result<PeakResult> {
    let times = window.grid(config, prep, d)?;
    let series = fidelity_series(config, prep, d, &times, horizon)?;
    let coarse = find_peak(&series, rule)?;
    let i = coarse.sample;
    if i == 0 || i + 1 >= series.len() {
        return Ok(coarse);
    }
    let kernel = TransferKernel::new(config, prep, d)?;
    let (t, f) = golden_max(&kernel, series.times[i - 1], series.times[i + 1])?;
    if f >= series.values[i] {
        Ok(PeakResult {
            t_star: t,
            f_star: f,
            ..coarse
        })
    } else {
        Ok(PeakResult {
            t_star: series.times[i],
            f_star: series.values[i],
            ..coarse
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePeak {
    pub receiver: i64,
    pub peak: PeakResult,
}

/// Peak fidelity per receiver offset. No monotonicity is imposed.
pub fn max_fidelity_vs_distance(
    config: &RingConfig,
    prep: &Preparation,
    receivers: &[i64],
    window: &TimeWindow,
    rule: PeakRule,
    horizon: Horizon,
) -> Result<Vec<DistancePeak>> {
    receivers
        .iter()
        .map(|&d| {
            Ok(DistancePeak {
                receiver: d,
                peak: locate_peak(config, prep, d, window, rule, horizon)?,
            })
        })
        .collect()
}

/// Occupation mass allowed within the antipodal band before the center of
/// mass is declared undefined.
pub const ANTIPODE_MASS_LIMIT: f64 = 1e-6;

/// `Σ_j j̃ P_j` with `j̃` the signed ring offset of `j` from `reference`.
///
/// Fails when more than [`ANTIPODE_MASS_LIMIT`] of the occupation lies within
/// `max(1, N/8)` sites of the antipode, where the signed offset is ambiguous.
pub fn center_of_mass(occupation: &[f64], reference: usize) -> Result<f64> {
    let n = occupation.len();
    if reference >= n {
        return Err(Error::IndexOutOfRange {
            index: reference,
            len: n,
        });
    }
    let total: f64 = occupation.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sqr: total });
    }
    let guard = (n / 8).max(1) as i64;
    let edge = (n / 2) as i64 - guard;
    let mut antipodal = 0.0;
    let mut moment = 0.0;
    for (j, p) in occupation.iter().enumerate() {
        let offset = signed_offset((j + n - reference) % n, n);
        if offset.abs() >= edge {
            antipodal += p;
        }
        moment += offset as f64 * p;
    }
    if antipodal > ANTIPODE_MASS_LIMIT {
        return Err(Error::CenterUndefined);
    }
    Ok(moment)
}
