//! Self-consistency suites behind `ringtransfer validate`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use ringtransfer_core::analytic::{bessel_j, peak_time_linear, peak_time_theta0};
use ringtransfer_core::oracle::{build_hamiltonian_oriented, evolve_stepper, HoppingOrientation};
use ringtransfer_core::ring::{evolve_with, to_momentum_with};
use ringtransfer_core::{
    evolve, locate_peak, prepare, probability_distribution, to_momentum, Horizon, PeakRule,
    Preparation, RingConfig, TimeWindow, WavePacket,
};

use crate::fft::RustFft;

type CoreResult<T> = ringtransfer_core::Result<T>;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn max_dev(a: &WavePacket, b: &WavePacket) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn oracle_agreement(orientation: HoppingOrientation) -> CoreResult<(bool, String)> {
    let devs = [0.0, -FRAC_PI_4, -FRAC_PI_2]
        .par_iter()
        .map(|&theta| {
            let cfg = RingConfig::new(64, 1.0, theta)?;
            let packet = prepare(
                &cfg,
                &Preparation::Square {
                    center: 0,
                    half_width: 5,
                },
            )?;
            let h = build_hamiltonian_oriented(&cfg, orientation)?;
            let stepped = evolve_stepper(&h, &packet, 10.0, 1e-3)?;
            Ok(max_dev(&evolve(&cfg, &packet, 10.0)?, &stepped))
        })
        .collect::<CoreResult<Vec<f64>>>()?;
    let worst = devs.into_iter().fold(0.0, f64::max);
    Ok((
        worst <= 1e-7,
        format!("max deviation {worst:.2e} (limit 1e-7)"),
    ))
}

fn eigen_agreement(orientation: HoppingOrientation) -> CoreResult<(bool, String)> {
    let mut eig: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for n in [4usize, 8, 50] {
        for theta in [0.0, -FRAC_PI_4, -FRAC_PI_2, 0.9] {
            let cfg = RingConfig::new(n, 1.0, theta)?;
            let h = build_hamiltonian_oriented(&cfg, orientation)?;
            let mut want = cfg.energies();
            want.sort_by(f64::total_cmp);
            for (a, b) in h.eigenvalues().iter().zip(&want) {
                eig = eig.max((a - b).abs());
            }
            for k in 0..n {
                residual = residual.max(h.plane_wave_residual(cfg.momentum(k), cfg.dispersion(k)?));
            }
        }
    }
    Ok((
        eig <= 1e-10 && residual <= 1e-10,
        format!("eigenvalue error {eig:.2e}, plane-wave residual {residual:.2e} (limit 1e-10)"),
    ))
}

fn bessel_identities() -> CoreResult<(bool, String)> {
    let mut recurrence: f64 = 0.0;
    let mut sum_rule: f64 = 0.0;
    for i in 0..=50 {
        let x = 0.5 + 49.5 * i as f64 / 50.0;
        for n in 1..=100u32 {
            let lhs = bessel_j(n - 1, x)? + bessel_j(n + 1, x)?;
            recurrence = recurrence.max((lhs - 2.0 * n as f64 / x * bessel_j(n, x)?).abs());
        }
        let mut s = bessel_j(0, x)?.powi(2);
        for n in 1..=(x as u32 + 60) {
            s += 2.0 * bessel_j(n, x)?.powi(2);
        }
        sum_rule = sum_rule.max((s - 1.0).abs());
    }
    Ok((
        recurrence <= 1e-9 && sum_rule <= 1e-9,
        format!("recurrence {recurrence:.2e}, sum rule {sum_rule:.2e} (limit 1e-9)"),
    ))
}

fn unitarity() -> CoreResult<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut norm: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(8..=512usize);
        let cfg = RingConfig::new(n, 1.0, rng.gen_range(-PI..PI))?;
        let prep = Preparation::Square {
            center: rng.gen_range(0..n),
            half_width: rng.gen_range(0..=3),
        };
        let packet = prepare(&cfg, &prep)?;
        let out = evolve(&cfg, &packet, rng.gen_range(0.0..100.0))?;
        norm = norm.max((probability_distribution(&out).iter().sum::<f64>() - 1.0).abs());
        parseval = parseval.max((to_momentum(&out).parseval_sum() - 1.0).abs());
    }
    let cfg = RingConfig::new(600, 1.0, -0.6)?;
    let packet = prepare(
        &cfg,
        &Preparation::Gaussian {
            center: 17,
            width: 4.0,
        },
    )?;
    let fast = evolve_with(&RustFft, &cfg, &packet, 37.0)?;
    let backend = max_dev(&fast, &evolve(&cfg, &packet, 37.0)?);
    parseval = parseval.max((to_momentum_with(&RustFft, &fast).parseval_sum() - 1.0).abs());
    Ok((
        norm < 1e-12 && parseval < 1e-12 && backend < 1e-10,
        format!("norm {norm:.2e}, Parseval {parseval:.2e}, fft vs direct {backend:.2e}"),
    ))
}

fn peak_times() -> CoreResult<(bool, String)> {
    let prep = Preparation::Square {
        center: 0,
        half_width: 5,
    };
    let linear = RingConfig::new(500, 1.0, -FRAC_PI_2)?;
    let window = TimeWindow::default_for(&linear);
    let fast = locate_peak(
        &linear,
        &prep,
        60,
        &window,
        PeakRule::FirstLocal,
        Horizon::Enforce,
    )?;
    let fast_target = peak_time_linear(60.0, 1.0);
    let flat = RingConfig::new(500, 1.0, 0.0)?;
    let slow = locate_peak(
        &flat,
        &prep,
        30,
        &window,
        PeakRule::GlobalInWindow,
        Horizon::Enforce,
    )?;
    let slow_target = peak_time_theta0(11, 30.0, 1.0)?;
    let ok = (fast.t_star - fast_target).abs() <= 0.05 * fast_target
        && (slow.t_star - slow_target).abs() <= 0.1 * slow_target;
    Ok((
        ok,
        format!(
            "linear phase d=60: {:.3} vs {fast_target:.3}; flat phase d=30: {:.3} vs {slow_target:.3}",
            fast.t_star, slow.t_star
        ),
    ))
}

fn record(name: &'static str, outcome: CoreResult<(bool, String)>) -> SuiteResult {
    match outcome {
        Ok((passed, detail)) => SuiteResult {
            name,
            passed,
            detail,
        },
        Err(e) => SuiteResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_all(inject_sign_flip: bool) -> Vec<SuiteResult> {
    let orientation = if inject_sign_flip {
        HoppingOrientation::Reversed
    } else {
        HoppingOrientation::Standard
    };
    vec![
        record("oracle_agreement", oracle_agreement(orientation)),
        record("bessel_identities", bessel_identities()),
        record("unitarity", unitarity()),
        record("peak_times", peak_times()),
        record("eigen_agreement", eigen_agreement(orientation)),
    ]
}

pub fn to_json(results: &[SuiteResult]) -> serde_json::Value {
    let mut suites = serde_json::Map::new();
    let mut details = serde_json::Map::new();
    for r in results {
        suites.insert(r.name.to_string(), r.passed.into());
        details.insert(r.name.to_string(), r.detail.clone().into());
    }
    serde_json::json!({
        "passed": results.iter().all(|r| r.passed),
        "suites": suites,
        "details": details,
    })
}
