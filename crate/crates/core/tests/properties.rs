use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use ringtransfer_core::observables::uniform_grid;
use ringtransfer_core::ring::MomentumAmplitudes;
use ringtransfer_core::sweep::{sweep_theta, SweepGrid, SweepSpec};
use ringtransfer_core::{
    evolve, fidelity, prepare, probability_distribution, to_momentum, transfer_amplitude, Horizon,
    PeakRule, Preparation, RingConfig, TimeWindow, WavePacket,
};

fn max_dev(a: &WavePacket, b: &WavePacket) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Ring plus a preparation that fits on it.
fn problem() -> impl Strategy<Value = (RingConfig, Preparation)> {
    (4usize..=256, 0.5f64..2.0, -PI..PI).prop_flat_map(|(n, w, theta)| {
        let cfg = RingConfig::new(n, w, theta).unwrap();
        let prep = prop_oneof![
            (0..n).prop_map(|center| Preparation::Atomic { center }),
            (0..n, 0..=((n - 1) / 2).min(12))
                .prop_map(|(center, half_width)| Preparation::Square { center, half_width }),
            (0..n, 0.3f64..(n as f64 / 4.0 - 0.01).min(8.0))
                .prop_map(|(center, width)| Preparation::Gaussian { center, width }),
        ];
        (Just(cfg), prep)
    })
}

/// Preparations centered at site 0, symmetric under `j → -j`.
fn symmetric_problem() -> impl Strategy<Value = (RingConfig, Preparation)> {
    (40usize..=200, -PI..PI).prop_flat_map(|(n, theta)| {
        let cfg = RingConfig::new(n, 1.0, theta).unwrap();
        let prep = prop_oneof![
            Just(Preparation::Atomic { center: 0 }),
            (0usize..=6).prop_map(|half_width| Preparation::Square {
                center: 0,
                half_width
            }),
            (0.5f64..4.0).prop_map(|width| Preparation::Gaussian { center: 0, width }),
        ];
        (Just(cfg), prep)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_is_unitary((cfg, prep) in problem(), t in 0.0f64..100.0) {
        let packet = prepare(&cfg, &prep).unwrap();
        let out = evolve(&cfg, &packet, t).unwrap();
        let total: f64 = probability_distribution(&out).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn evolution_composes((cfg, prep) in problem(), t1 in 0.0f64..50.0, t2 in 0.0f64..50.0) {
        let packet = prepare(&cfg, &prep).unwrap();
        let stepwise = evolve(&cfg, &evolve(&cfg, &packet, t1).unwrap(), t2).unwrap();
        let direct = evolve(&cfg, &packet, t1 + t2).unwrap();
        prop_assert!(max_dev(&stepwise, &direct) < 1e-10);
    }

    #[test]
    fn evolution_reverses((cfg, prep) in problem(), t in 0.0f64..100.0) {
        let packet = prepare(&cfg, &prep).unwrap();
        let back = evolve(&cfg, &evolve(&cfg, &packet, t).unwrap(), -t).unwrap();
        prop_assert!(max_dev(&back, &packet) < 1e-10);
    }

    #[test]
    fn energy_is_conserved((cfg, prep) in problem(), t in 0.0f64..100.0) {
        let packet = prepare(&cfg, &prep).unwrap();
        let before = to_momentum(&packet).mean_energy(&cfg).unwrap();
        let after = to_momentum(&evolve(&cfg, &packet, t).unwrap())
            .mean_energy(&cfg)
            .unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn flat_phase_spreads_symmetrically((cfg, prep) in symmetric_problem(), t in 0.0f64..30.0) {
        let cfg = cfg.with_phase(0.0).unwrap();
        let n = cfg.n_sites();
        let occupation =
            probability_distribution(&evolve(&cfg, &prepare(&cfg, &prep).unwrap(), t).unwrap());
        for j in 1..n {
            prop_assert!((occupation[j] - occupation[n - j]).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_is_periodic((cfg, prep) in symmetric_problem(), d in -15i64..=15, t in 0.0f64..30.0) {
        let shifted = RingConfig::new(cfg.n_sites(), 1.0, cfg.phase() + TAU).unwrap();
        let a = fidelity(&cfg, &prep, d, t).unwrap();
        let b = fidelity(&shifted, &prep, d, t).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn fidelity_matches_site_overlap((cfg, prep) in problem(), d in -1i64..=1, t in 0.0f64..60.0) {
        let n = cfg.n_sites() as i64;
        let d = d * (n / 2 - 1) / 2;
        let packet = prepare(&cfg, &prep).unwrap();
        let evolved = evolve(&cfg, &packet, t).unwrap();
        let overlap = packet.translate(d).overlap(&evolved).unwrap();
        let amp = transfer_amplitude(&cfg, &prep, d, t).unwrap();
        prop_assert!((amp - overlap).norm() < 1e-12, "{amp} vs {overlap}");
        let f = amp.norm_sqr();
        prop_assert!((-1e-15..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn atomic_fidelity_is_occupation(n in 8usize..=256, theta in -PI..PI, t in 0.0f64..40.0, raw in 0usize..1000) {
        let cfg = RingConfig::new(n, 1.0, theta).unwrap();
        let prep = Preparation::Atomic { center: 3 % n };
        let d = (raw % (n / 2)) as i64 - (n as i64 - 1) / 4;
        let occupation =
            probability_distribution(&evolve(&cfg, &prepare(&cfg, &prep).unwrap(), t).unwrap());
        let f = fidelity(&cfg, &prep, d, t).unwrap();
        prop_assert!((f - occupation[cfg.site(3 + d)]).abs() < 1e-12);
    }

    #[test]
    fn receivers_mirror((cfg, prep) in symmetric_problem(), d in 1i64..=19, t in 0.0f64..30.0) {
        let theta = cfg.phase();
        let flipped = cfg.with_phase(-theta).unwrap();
        let flat = cfg.with_phase(0.0).unwrap();
        let ahead = fidelity(&cfg, &prep, d, t).unwrap();
        let behind = fidelity(&flipped, &prep, -d, t).unwrap();
        prop_assert!((ahead - behind).abs() < 1e-12);
        let left = fidelity(&flat, &prep, -d, t).unwrap();
        let right = fidelity(&flat, &prep, d, t).unwrap();
        prop_assert!((left - right).abs() < 1e-12);
    }
}

#[test]
fn momentum_amplitudes_reject_wrong_norm() {
    let n = 16;
    let amps = vec![ringtransfer_core::Complex64::new(1.0, 0.0); n];
    assert!(MomentumAmplitudes::new(amps).is_ok());
    let amps = vec![ringtransfer_core::Complex64::new(1.1, 0.0); n];
    assert!(MomentumAmplitudes::new(amps).is_err());
}

fn mirror_spec(thetas: Vec<f64>, receiver: i64) -> SweepSpec {
    let base = RingConfig::new(200, 1.0, 0.0).unwrap();
    SweepSpec {
        base,
        prep: Preparation::Square {
            center: 0,
            half_width: 3,
        },
        receiver,
        grid: SweepGrid::Theta(thetas),
        window: TimeWindow {
            t_max: Some(30.0),
            dt: 0.05,
        },
        rule: PeakRule::GlobalInWindow,
        horizon: Horizon::Enforce,
    }
}

#[test]
fn sweep_is_mirror_symmetric() {
    let thetas: Vec<f64> = uniform_grid(PI, PI / 8.0)
        .unwrap()
        .into_iter()
        .map(|x| x - PI)
        .collect();
    let negated: Vec<f64> = thetas.iter().map(|x| -x).collect();
    let forward = sweep_theta(&mirror_spec(thetas, 25)).unwrap();
    let mirrored = sweep_theta(&mirror_spec(negated, -25)).unwrap();
    for (a, b) in forward.rows.iter().zip(&mirrored.rows) {
        assert!((a.f_star - b.f_star).abs() < 1e-9, "{a:?} {b:?}");
    }
}

#[test]
fn sweep_is_deterministic() {
    let spec = mirror_spec(vec![-1.0, -0.5, 0.25], 20);
    let a = sweep_theta(&spec).unwrap();
    let b = sweep_theta(&spec).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.t_star.to_bits(), y.t_star.to_bits());
        assert_eq!(x.f_star.to_bits(), y.f_star.to_bits());
    }
    assert_eq!(a.best, b.best);
}
