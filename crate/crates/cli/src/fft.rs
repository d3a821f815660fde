//! `rustfft` implementation of the core transform pair, used on large rings.

use ringtransfer_core::{Complex64, DirectDft, SpectralTransform};
use rustfft::FftPlanner;

/// Rings at least this large go through the FFT.
pub const FFT_THRESHOLD: usize = 512;

#[derive(Debug, Clone, Copy, Default)]
pub struct RustFft;

impl RustFft {
    fn run(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let mut planner = FftPlanner::<f64>::new();
        let fft = if inverse {
            planner.plan_fft_inverse(input.len())
        } else {
            planner.plan_fft_forward(input.len())
        };
        let mut buf = input.to_vec();
        fft.process(&mut buf);
        buf
    }
}

impl SpectralTransform for RustFft {
    fn forward(&self, site: &[Complex64]) -> Vec<Complex64> {
        Self::run(site, false)
    }

    fn inverse(&self, momentum: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / momentum.len() as f64;
        let mut out = Self::run(momentum, true);
        out.iter_mut().for_each(|a| *a *= scale);
        out
    }
}

/// Direct transform below [`FFT_THRESHOLD`] sites, FFT from there up.
#[derive(Debug, Clone, Copy)]
pub enum Backend {
    Direct,
    Fft,
}

impl Backend {
    pub fn for_ring(n_sites: usize) -> Self {
        if n_sites >= FFT_THRESHOLD {
            Backend::Fft
        } else {
            Backend::Direct
        }
    }
}

impl SpectralTransform for Backend {
    fn forward(&self, site: &[Complex64]) -> Vec<Complex64> {
        match self {
            Backend::Direct => DirectDft.forward(site),
            Backend::Fft => RustFft.forward(site),
        }
    }

    fn inverse(&self, momentum: &[Complex64]) -> Vec<Complex64> {
        match self {
            Backend::Direct => DirectDft.inverse(momentum),
            Backend::Fft => RustFft.inverse(momentum),
        }
    }
}
