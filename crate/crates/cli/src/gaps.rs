//! Relative gaps `g = (m - s) / m` of anytime traces against the best final
//! score `m` over all methods.

use std::fmt;
use std::str::FromStr;

use nads_core::TracePoint;

use crate::error::{CliError, Result};

/// Sample points, in percent of the run horizon.
pub const GAP_PERCENTS: [u32; 5] = [15, 30, 50, 75, 100];

/// What the horizon measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GapAxis {
    #[default]
    Time,
    Evals,
}

impl fmt::Display for GapAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapAxis::Time => "time",
            GapAxis::Evals => "evals",
        })
    }
}

impl FromStr for GapAxis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "time" => Ok(GapAxis::Time),
            "evals" => Ok(GapAxis::Evals),
            other => Err(CliError::config(format!("unknown gap axis {other:?}"))),
        }
    }
}

/// The incumbent history of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub method: String,
    pub budget: usize,
    pub start: String,
    pub points: Vec<TracePoint>,
}

fn position(p: &TracePoint, axis: GapAxis) -> f64 {
    match axis {
        GapAxis::Time => p.elapsed_seconds,
        GapAxis::Evals => p.evals as f64,
    }
}

impl Trace {
    pub fn final_score(&self) -> f64 {
        self.points.last().map_or(f64::NEG_INFINITY, |p| p.score)
    }

    /// Incumbent at `x`; before the first record the first record counts.
    pub fn score_at(&self, x: f64, axis: GapAxis) -> f64 {
        let k = self.points.partition_point(|p| position(p, axis) <= x);
        self.points[k.saturating_sub(1)].score
    }

    /// Furthest point reached along `axis`.
    pub fn extent(&self, axis: GapAxis) -> f64 {
        self.points.last().map_or(0.0, |p| position(p, axis))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    pub method: String,
    pub start: String,
    pub reference_m: f64,
    /// `(position, gap)` at every incumbent change.
    pub rows: Vec<(f64, f64)>,
    /// Gaps at [`GAP_PERCENTS`] of the horizon; the last is the final gap.
    pub sampled: [f64; 5],
}

/// Best final score over `traces`.
pub fn reference_score(traces: &[Trace]) -> f64 {
    traces.iter().map(Trace::final_score).fold(f64::NEG_INFINITY, f64::max)
}

pub fn compute_gap_series(
    traces: &[Trace],
    reference_m: f64,
    axis: GapAxis,
    horizon: f64,
) -> Result<Vec<GapSeries>> {
    if !(reference_m > 0.0) {
        return Err(CliError::DegenerateReference(reference_m));
    }
    if !(horizon > 0.0) {
        return Err(CliError::config(format!("gap horizon must be positive, got {horizon}")));
    }
    let gap = |s: f64| (reference_m - s) / reference_m;
    traces
        .iter()
        .map(|t| {
            if t.points.is_empty() {
                return Err(CliError::config(format!(
                    "empty trace for {} at B={} start {}",
                    t.method, t.budget, t.start
                )));
            }
            let rows = t.points.iter().map(|p| (position(p, axis), gap(p.score))).collect();
            let mut sampled = [0.0; 5];
            for (slot, &pct) in sampled.iter_mut().zip(&GAP_PERCENTS) {
                *slot = if pct == 100 {
                    gap(t.final_score())
                } else {
                    gap(t.score_at(horizon * pct as f64 / 100.0, axis))
                };
            }
            Ok(GapSeries {
                method: t.method.clone(),
                start: t.start.clone(),
                reference_m,
                rows,
                sampled,
            })
        })
        .collect()
}
