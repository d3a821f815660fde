//! Single-particle wavepacket transport on an `N`-site tight-binding ring
//! threaded by a topological hopping phase `θ`.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs:
//!
//! - [`ring`]: problem definition, basis transforms and exact spectral
//!   time evolution.
//! - [`observables`]: transfer amplitude, fidelity, occupation profiles and
//!   peak extraction.
//! - [`analytic`]: Bessel-limit and Gaussian closed forms used as predictors.
//! - [`oracle`]: dense site-space Hamiltonian and an explicit RK4 stepper that
//!   shares no code with the spectral propagator.
//! - [`sweep`]: phase and packet-width scans of the peak fidelity.
//!
//! Units: `ħ = 1`, lattice constant `a = 1`, energies in units of the hopping
//! `w`, times in units of `1/w`.
#![no_std]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod ring;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use observables::{
    center_of_mass, fidelity, fidelity_series, first_peak, global_peak, locate_peak,
    max_fidelity_vs_distance, no_wrap_horizon, probability_distribution, transfer_amplitude,
    DistancePeak, FidelitySeries, Horizon, PeakKind, PeakResult, PeakRule, TimeWindow,
};
pub use ring::{
    evolve, from_momentum, prepare, square_form_factor, to_momentum, DirectDft, MomentumAmplitudes,
    Preparation, RingConfig, SpectralTransform, WavePacket,
};
