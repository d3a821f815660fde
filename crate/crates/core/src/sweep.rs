//! Grid scans of the peak transfer fidelity over the hopping phase or the
//! square-packet half-width.
//!
//! Each grid point is independent. [`SweepSpec::evaluate`] computes one row,
//! so callers can farm rows out to threads and still feed them to
//! [`summarize`] in grid order for an identical result.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::observables::{locate_peak, no_wrap_horizon, Horizon, PeakKind, PeakRule, TimeWindow};
use crate::ring::{Preparation, RingConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    /// Hopping phases in radians.
    Theta(Vec<f64>),
    /// Square-packet half-widths `M`; the center comes from `prep`.
    HalfWidth(Vec<usize>),
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        match self {
            SweepGrid::Theta(v) => v.len(),
            SweepGrid::HalfWidth(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: RingConfig,
    pub prep: Preparation,
    pub receiver: i64,
    pub grid: SweepGrid,
    pub window: TimeWindow,
    pub rule: PeakRule,
    pub horizon: Horizon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// `θ` in radians or `M`, depending on the grid.
    pub parameter: f64,
    pub t_star: f64,
    pub f_star: f64,
    pub kind: PeakKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Index of the row with the largest `f_star`.
    pub best: usize,
}

impl SweepOutcome {
    pub fn best_row(&self) -> &SweepRow {
        &self.rows[self.best]
    }
}

impl SweepSpec {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Problem definition at grid point `index`.
    pub fn point(&self, index: usize) -> Result<(RingConfig, Preparation)> {
        match &self.grid {
            SweepGrid::Theta(thetas) => {
                let theta = *thetas.get(index).ok_or(Error::IndexOutOfRange {
                    index,
                    len: thetas.len(),
                })?;
                Ok((self.base.with_phase(theta)?, self.prep))
            }
            SweepGrid::HalfWidth(widths) => {
                let half_width = *widths.get(index).ok_or(Error::IndexOutOfRange {
                    index,
                    len: widths.len(),
                })?;
                let prep = Preparation::Square {
                    center: self.prep.center(),
                    half_width,
                };
                Ok((self.base, prep))
            }
        }
    }

    fn parameter(&self, index: usize) -> f64 {
        match &self.grid {
            SweepGrid::Theta(v) => v[index],
            SweepGrid::HalfWidth(v) => v[index] as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidGrid("sweep grid is empty"));
        }
        if let SweepGrid::HalfWidth(widths) = &self.grid {
            let quarter = self.base.n_sites() / 4;
            if widths.iter().any(|&m| 2 * m + 1 > quarter) {
                return Err(Error::PacketTooWide);
            }
        }
        for index in 0..self.len() {
            let (config, prep) = self.point(index)?;
            prep.validate(config.n_sites())?;
            if let (Some(t_max), Horizon::Enforce) = (self.window.t_max, self.horizon) {
                let limit = no_wrap_horizon(&config, &prep, self.receiver);
                if t_max > limit + 1e-9 {
                    return Err(Error::HorizonExceeded {
                        t: t_max,
                        horizon: limit,
                    });
                }
            }
        }
        Ok(())
    }

    /// Peak of `F_d(t)` at one grid point.
    pub fn evaluate(&self, index: usize) -> Result<SweepRow> {
        let (config, prep) = self.point(index)?;
        let peak = locate_peak(
            &config,
            &prep,
            self.receiver,
            &self.window,
            self.rule,
            self.horizon,
        )?;
        Ok(SweepRow {
            parameter: self.parameter(index),
            t_star: peak.t_star,
            f_star: peak.f_star,
            kind: peak.kind,
        })
    }
}

/// Pick the row with the largest `f_star`; ties go to the smaller
/// `|parameter|`, then to the earlier row.
pub fn summarize(rows: Vec<SweepRow>) -> Result<SweepOutcome> {
    if rows.is_empty() {
        return Err(Error::InvalidGrid("sweep grid is empty"));
    }
    let mut best = 0;
    for (i, row) in rows.iter().enumerate().skip(1) {
        let lead = &rows[best];
        if row.f_star > lead.f_star
            || (row.f_star == lead.f_star && row.parameter.abs() < lead.parameter.abs())
        {
            best = i;
        }
    }
    Ok(SweepOutcome { rows, best })
}

fn run(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let rows = (0..spec.len())
        .map(|i| spec.evaluate(i))
        .collect::<Result<Vec<_>>>()?;
    summarize(rows)
}

/// Peak fidelity at the receiver for each phase in the grid.
pub fn sweep_theta(spec: &SweepSpec) -> Result<SweepOutcome> {
    if !matches!(spec.grid, SweepGrid::Theta(_)) {
        return Err(Error::InvalidConfig("sweep_theta needs a phase grid"));
    }
    run(spec)
}

/// Peak fidelity at the receiver for each square half-width in the grid;
/// `M = 0` is the atomic preparation.
pub fn sweep_width(spec: &SweepSpec) -> Result<SweepOutcome> {
    if !matches!(spec.grid, SweepGrid::HalfWidth(_)) {
        return Err(Error::InvalidConfig("sweep_width needs a half-width grid"));
    }
    run(spec)
}
