use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringtransfer_core::{PeakRule, Preparation, RingConfig};

use crate::Failure;

/// Wavepacket transfer on a tight-binding ring with a hopping phase.
///
/// Times (`--times`, `--tmax`, `--dt`) are in units of 1/w and are written
/// back out in the same units.
#[derive(Debug, Parser)]
#[command(name = "ringtransfer", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Site occupation P_j at the requested times, one block per time.
    Profile(ProfileArgs),
    /// Transfer fidelity F_d(t) per receiver, then a peak summary block.
    Fidelity(FidelityArgs),
    /// Peak fidelity against receiver distance for each phase.
    Maxcurve(MaxcurveArgs),
    /// Peak fidelity over a grid of phases or square half-widths.
    Sweep(SweepArgs),
    /// Run the self-consistency suites and report pass/fail.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrepKind {
    Atomic,
    Square,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    First,
    Global,
}

impl From<RuleArg> for PeakRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::First => PeakRule::FirstLocal,
            RuleArg::Global => PeakRule::GlobalInWindow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyticArg {
    /// Atomic-limit J_d(2wt)^2.
    Bessel,
    /// Gaussian approximant for a square packet of width 2M+1.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepOver {
    Theta,
    Width,
}

#[derive(Debug, Clone, Args)]
pub struct PacketArgs {
    /// Number of ring sites N.
    #[arg(long, default_value_t = 500)]
    pub sites: usize,
    /// Hopping amplitude w.
    #[arg(long, default_value_t = 1.0)]
    pub hopping: f64,
    #[arg(long, value_enum, default_value_t = PrepKind::Square)]
    pub prep: PrepKind,
    /// Square packet half-width M (width 2M+1).
    #[arg(long, default_value_t = 5)]
    pub halfwidth: usize,
    /// Gaussian packet width σ in sites.
    #[arg(long, default_value_t = 3.0)]
    pub gwidth: f64,
    /// Site the packet is centered on.
    #[arg(long, default_value_t = 0)]
    pub center: usize,
    /// Permit times past the no-wrap horizon.
    #[arg(long)]
    pub allow_wrap: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl PacketArgs {
    pub fn config(&self, theta: f64) -> Result<RingConfig, Failure> {
        Ok(RingConfig::new(self.sites, self.hopping, theta)?)
    }

    pub fn preparation(&self) -> Result<Preparation, Failure> {
        let prep = match self.prep {
            PrepKind::Atomic => Preparation::Atomic {
                center: self.center,
            },
            PrepKind::Square => Preparation::Square {
                center: self.center,
                half_width: self.halfwidth,
            },
            PrepKind::Gaussian => Preparation::Gaussian {
                center: self.center,
                width: self.gwidth,
            },
        };
        prep.validate(self.sites)?;
        Ok(prep)
    }

    pub fn prep_name(&self) -> &'static str {
        match self.prep {
            PrepKind::Atomic => "atomic",
            PrepKind::Square => "square",
            PrepKind::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub packet: PacketArgs,
    /// Hopping phase θ in radians; accepts `pi/2`, `-pi/4` and the like.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_time)]
    pub times: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub packet: PacketArgs,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    /// Receiver offsets d; repeatable or comma-separated.
    #[arg(
        long = "receiver",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub receivers: Vec<i64>,
    /// End of the time window; defaults to each receiver's no-wrap horizon.
    #[arg(long, value_parser = parse_time)]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 0.05, value_parser = parse_step)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::First)]
    pub peak_rule: RuleArg,
    /// Add a closed-form column next to the exact fidelity.
    #[arg(long, value_enum)]
    pub analytic: Option<AnalyticArg>,
}

#[derive(Debug, Args)]
pub struct MaxcurveArgs {
    #[command(flatten)]
    pub packet: PacketArgs,
    /// Phases, one curve each.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,-pi/4,-pi/2",
        value_parser = parse_angle,
        allow_hyphen_values = true
    )]
    pub theta: Vec<f64>,
    #[arg(
        long = "receiver",
        value_delimiter = ',',
        default_value = "10,20,30,40,50,60,70,80,90",
        allow_negative_numbers = true
    )]
    pub receivers: Vec<i64>,
    #[arg(long, value_parser = parse_time)]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 0.05, value_parser = parse_step)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::First)]
    pub peak_rule: RuleArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub packet: PacketArgs,
    #[arg(long, value_enum)]
    pub over: SweepOver,
    /// Phase grid for `--over theta`; a single fixed phase for `--over width`.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0",
        value_parser = parse_angle,
        allow_hyphen_values = true
    )]
    pub theta: Vec<f64>,
    /// Half-width grid for `--over width`.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8,9,10")]
    pub halfwidths: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub receiver: i64,
    #[arg(long, value_parser = parse_time)]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 0.05, value_parser = parse_step)]
    pub dt: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::First)]
    pub peak_rule: RuleArg,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Print one JSON object instead of text.
    #[arg(long)]
    pub json: bool,
    /// Build the oracle with the hopping phase on the wrong bond. The
    /// eigen-agreement suite must fail.
    #[arg(long, hide = true)]
    pub inject_sign_flip: bool,
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

/// Radians, or `[-][k*]pi[/m]`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = parse_number(s) {
        return Ok(x);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let Some(at) = body.find("pi") else {
        return Err(format!("`{s}` is not an angle"));
    };
    let (head, tail) = (&body[..at], &body[at + 2..]);
    let factor = match head.strip_suffix('*') {
        Some(k) => parse_number(k)?,
        None if head.is_empty() => 1.0,
        None => return Err(format!("`{s}` is not an angle")),
    };
    let divisor = match tail.strip_prefix('/') {
        Some(m) => parse_number(m)?,
        None if tail.is_empty() => 1.0,
        None => return Err(format!("`{s}` is not an angle")),
    };
    if divisor == 0.0 {
        return Err(format!("`{s}` divides by zero"));
    }
    Ok(sign * factor * PI / divisor)
}

fn parse_time(s: &str) -> Result<f64, String> {
    let t = parse_number(s)?;
    if t < 0.0 {
        return Err(format!("time `{s}` is negative"));
    }
    Ok(t)
}

fn parse_step(s: &str) -> Result<f64, String> {
    let dt = parse_number(s)?;
    if dt <= 0.0 {
        return Err(format!("step `{s}` must be positive"));
    }
    Ok(dt)
}
