//! `profile`, `fidelity`, `maxcurve` and `sweep`. Flag times are in units of
//! `1/w`; they are divided by `w` on the way in and multiplied back on the way
//! out.

use rayon::prelude::*;
use ringtransfer_core::analytic::{atomic_fidelity_limit, gaussian_fidelity};
use ringtransfer_core::ring::Propagator;
use ringtransfer_core::sweep::{summarize, SweepGrid, SweepSpec};
use ringtransfer_core::{
    fidelity_series, locate_peak, no_wrap_horizon, prepare, probability_distribution, Horizon,
    PeakKind, PeakResult, Preparation, RingConfig, TimeWindow,
};

use crate::args::{
    AnalyticArg, FidelityArgs, MaxcurveArgs, PacketArgs, ProfileArgs, RuleArg, SweepArgs, SweepOver,
};
use crate::fft::Backend;
use crate::output::{num, Manifest, Table};
use crate::Failure;

fn horizon_mode(allow_wrap: bool) -> Horizon {
    if allow_wrap {
        Horizon::AllowWrap
    } else {
        Horizon::Enforce
    }
}

fn window(packet: &PacketArgs, tmax: Option<f64>, dt: f64) -> TimeWindow {
    let w = packet.hopping;
    TimeWindow {
        t_max: tmax.map(|t| t / w),
        dt: dt / w,
    }
}

fn kind_label(kind: PeakKind) -> &'static str {
    match kind {
        PeakKind::FirstLocalMax => "first",
        PeakKind::GlobalInWindow => "global",
    }
}

fn rule_label(rule: RuleArg) -> &'static str {
    match rule {
        RuleArg::First => "first",
        RuleArg::Global => "global",
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn join_num(items: &[f64]) -> String {
    items.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

fn packet_manifest(m: Manifest, p: &PacketArgs) -> Manifest {
    let m = m
        .param("sites", p.sites)
        .param("hopping", num(p.hopping))
        .param("prep", p.prep_name())
        .param("center", p.center);
    let m = match p.prep_name() {
        "square" => m.param("halfwidth", p.halfwidth),
        "gaussian" => m.param("gwidth", num(p.gwidth)),
        _ => m,
    };
    m.param("allow_wrap", p.allow_wrap)
}

fn tmax_label(tmax: Option<f64>) -> String {
    tmax.map_or_else(|| "horizon".to_string(), num)
}

pub fn profile(args: &ProfileArgs) -> Result<(), Failure> {
    let p = &args.packet;
    let cfg = p.config(args.theta)?;
    let prep = p.preparation()?;
    let w = p.hopping;
    let limit = no_wrap_horizon(&cfg, &prep, 0) * w;
    if !p.allow_wrap {
        if let Some(&t) = args.times.iter().find(|&&t| t > limit + 1e-9) {
            return Err(Failure::Horizon(format!(
                "time {t} exceeds the no-wrap horizon {limit}; pass --allow-wrap to override"
            )));
        }
    }
    let packet = prepare(&cfg, &prep)?;
    let backend = Backend::for_ring(cfg.n_sites());
    let propagator = Propagator::with_transform(&backend, &cfg, &packet)?;
    let blocks = args
        .times
        .par_iter()
        .map(|&t| {
            // At t = 0 the state is the prepared packet itself.
            let state = if t == 0.0 {
                packet.clone()
            } else {
                propagator.state_at_with(&backend, t / w)?
            };
            Ok(probability_distribution(&state))
        })
        .collect::<Result<Vec<_>, ringtransfer_core::Error>>()?;

    let manifest = packet_manifest(Manifest::new("profile"), p)
        .param("theta", num(args.theta))
        .param("times", join_num(&args.times))
        .param("j", "signed offset from the packet center");
    let mut table = Table::new(&manifest);
    table.header(&["t", "j", "P"]);
    let n = cfg.n_sites() as i64;
    for (i, (t, occupation)) in args.times.iter().zip(&blocks).enumerate() {
        if i > 0 {
            table.gap();
        }
        for j in -(n / 2)..(n - n / 2) {
            let site = cfg.site(p.center as i64 + j);
            table.row(&[num(*t), j.to_string(), num(occupation[site])]);
        }
    }
    Ok(table.write(p.out.as_deref())?)
}

type Trace = (Vec<f64>, Vec<f64>, PeakResult);

fn trace(
    cfg: &RingConfig,
    prep: &Preparation,
    d: i64,
    window: &TimeWindow,
    args: &FidelityArgs,
) -> Result<Trace, ringtransfer_core::Error> {
    let horizon = horizon_mode(args.packet.allow_wrap);
    let times = window.grid(cfg, prep, d)?;
    let series = fidelity_series(cfg, prep, d, &times, horizon)?;
    let peak = locate_peak(cfg, prep, d, window, args.peak_rule.into(), horizon)?;
    Ok((series.times, series.values, peak))
}

pub fn fidelity(args: &FidelityArgs) -> Result<(), Failure> {
    let p = &args.packet;
    let cfg = p.config(args.theta)?;
    let prep = p.preparation()?;
    let w = p.hopping;
    let lambda = match (args.analytic, prep) {
        (Some(AnalyticArg::Gaussian), Preparation::Square { half_width, .. }) => 2 * half_width + 1,
        (Some(AnalyticArg::Gaussian), _) => {
            return Err(Failure::Usage(
                "--analytic gaussian needs --prep square".to_string(),
            ))
        }
        _ => 0,
    };
    let window = window(p, args.tmax, args.dt);
    let traces = args
        .receivers
        .par_iter()
        .map(|&d| trace(&cfg, &prep, d, &window, args))
        .collect::<Result<Vec<_>, _>>()?;

    let overlay = |d: i64, t: f64| -> Result<f64, ringtransfer_core::Error> {
        match args.analytic {
            Some(AnalyticArg::Bessel) => atomic_fidelity_limit(d, w, t),
            Some(AnalyticArg::Gaussian) => gaussian_fidelity(lambda, d as f64, w, args.theta, t),
            None => Ok(0.0),
        }
    };

    let manifest = packet_manifest(Manifest::new("fidelity"), p)
        .param("theta", num(args.theta))
        .param("receivers", join(&args.receivers))
        .param("tmax", tmax_label(args.tmax))
        .param("dt", num(args.dt))
        .param("peak_rule", rule_label(args.peak_rule))
        .param(
            "analytic",
            match args.analytic {
                Some(AnalyticArg::Bessel) => "bessel",
                Some(AnalyticArg::Gaussian) => "gaussian",
                None => "none",
            },
        );
    let mut table = Table::new(&manifest);
    match args.analytic {
        Some(_) => table.header(&["d", "t", "F", "F_analytic"]),
        None => table.header(&["d", "t", "F"]),
    }
    for (&d, (times, values, _)) in args.receivers.iter().zip(&traces) {
        for (&t, &f) in times.iter().zip(values) {
            let mut row = vec![d.to_string(), num(t * w), num(f)];
            if args.analytic.is_some() {
                row.push(num(overlay(d, t)?));
            }
            table.row(&row);
        }
    }
    table.gap();
    table.header(&["d", "t_star", "f_star", "rule"]);
    for (&d, (_, _, peak)) in args.receivers.iter().zip(&traces) {
        table.row(&[
            d.to_string(),
            num(peak.t_star * w),
            num(peak.f_star),
            kind_label(peak.kind).to_string(),
        ]);
    }
    Ok(table.write(p.out.as_deref())?)
}

pub fn maxcurve(args: &MaxcurveArgs) -> Result<(), Failure> {
    let p = &args.packet;
    let prep = p.preparation()?;
    let configs = args
        .theta
        .iter()
        .map(|&theta| p.config(theta))
        .collect::<Result<Vec<_>, _>>()?;
    let window = window(p, args.tmax, args.dt);
    let horizon = horizon_mode(p.allow_wrap);
    let jobs: Vec<(usize, i64)> = (0..configs.len())
        .flat_map(|i| args.receivers.iter().map(move |&d| (i, d)))
        .collect();
    let peaks = jobs
        .par_iter()
        .map(|&(i, d)| {
            locate_peak(
                &configs[i],
                &prep,
                d,
                &window,
                args.peak_rule.into(),
                horizon,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let manifest = packet_manifest(Manifest::new("maxcurve"), p)
        .param("theta", join_num(&args.theta))
        .param("receivers", join(&args.receivers))
        .param("tmax", tmax_label(args.tmax))
        .param("dt", num(args.dt))
        .param("peak_rule", rule_label(args.peak_rule));
    let mut table = Table::new(&manifest);
    table.header(&["theta", "d", "t_star", "f_star", "rule"]);
    for (&(i, d), peak) in jobs.iter().zip(&peaks) {
        table.row(&[
            num(args.theta[i]),
            d.to_string(),
            num(peak.t_star * p.hopping),
            num(peak.f_star),
            kind_label(peak.kind).to_string(),
        ]);
    }
    Ok(table.write(p.out.as_deref())?)
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let p = &args.packet;
    let prep = p.preparation()?;
    let (base, grid) = match args.over {
        SweepOver::Theta => (p.config(0.0)?, SweepGrid::Theta(args.theta.clone())),
        SweepOver::Width => {
            let [theta] = args.theta[..] else {
                return Err(Failure::Usage(
                    "--over width takes a single --theta".to_string(),
                ));
            };
            (
                p.config(theta)?,
                SweepGrid::HalfWidth(args.halfwidths.clone()),
            )
        }
    };
    let spec = SweepSpec {
        base,
        prep,
        receiver: args.receiver,
        grid,
        window: window(p, args.tmax, args.dt),
        rule: args.peak_rule.into(),
        horizon: horizon_mode(p.allow_wrap),
    };
    spec.validate()?;
    let rows = (0..spec.len())
        .into_par_iter()
        .map(|i| spec.evaluate(i))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome = summarize(rows)?;

    let (over, grid_text) = match args.over {
        SweepOver::Theta => ("theta", join_num(&args.theta)),
        SweepOver::Width => ("width", join(&args.halfwidths)),
    };
    let mut manifest = packet_manifest(Manifest::new("sweep"), p)
        .param("over", over)
        .param("grid", grid_text);
    if args.over == SweepOver::Width {
        manifest = manifest.param("theta", num(args.theta[0]));
    }
    let manifest = manifest
        .param("receiver", args.receiver)
        .param("tmax", tmax_label(args.tmax))
        .param("dt", num(args.dt))
        .param("peak_rule", rule_label(args.peak_rule));
    let mut table = Table::new(&manifest);
    let w = p.hopping;
    let line = |row: &ringtransfer_core::sweep::SweepRow| {
        let parameter = match args.over {
            SweepOver::Theta => num(row.parameter),
            SweepOver::Width => (row.parameter as usize).to_string(),
        };
        vec![
            parameter,
            num(row.t_star * w),
            num(row.f_star),
            kind_label(row.kind).to_string(),
        ]
    };
    table.header(&[over, "t_star", "f_star", "rule"]);
    for row in &outcome.rows {
        table.row(&line(row));
    }
    table.gap();
    table.header(&["best", "t_star", "f_star", "rule"]);
    table.row(&line(outcome.best_row()));
    Ok(table.write(p.out.as_deref())?)
}
