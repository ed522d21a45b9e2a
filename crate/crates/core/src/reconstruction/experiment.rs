//! Error curves `N ↦ sup_K |E_N(f; η) - f|` over a sampled polydisc.

use std::f64::consts::TAU;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::operator::{default_truncation, EvalPoint, Reconstructor};
use super::roundoff_unit;
use crate::directions::{DirectionSequence, Provenance};
use crate::error::Result;
use crate::numerics::{BivariateTaylor, Precision, PrecisionComplex};

/// Polydisc `|z1| ≤ r1, |z2| ≤ r2`, sampled at `per_circle` boundary points and the
/// center in each coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSet {
    pub r1: f64,
    pub r2: f64,
    pub per_circle: usize,
}

impl CompactSet {
    pub fn polydisc(radius: f64) -> Self {
        CompactSet {
            r1: radius,
            r2: radius,
            per_circle: 8,
        }
    }

    fn samples(r: f64, per_circle: usize, prec: Precision) -> Vec<PrecisionComplex> {
        let mut out = vec![PrecisionComplex::zero(prec)];
        for k in 0..per_circle {
            let t = TAU * k as f64 / per_circle as f64;
            out.push(PrecisionComplex::from_f64(r * t.cos(), r * t.sin(), prec));
        }
        out
    }

    /// `(per_circle + 1)^2` points.
    pub fn grid(&self, prec: Precision) -> Vec<EvalPoint> {
        let a = Self::samples(self.r1, self.per_circle, prec);
        let b = Self::samples(self.r2, self.per_circle, prec);
        a.iter()
            .flat_map(|z1| b.iter().map(move |z2| (z1.clone(), z2.clone())))
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExperimentOptions {
    pub precision: Precision,
    /// Fixed `M` for every `N`; `None` uses `max(2N, 40)`.
    pub truncation: Option<u32>,
    pub record_timing: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            precision: Precision::DEFAULT,
            truncation: None,
            record_timing: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub sup_error: f64,
    pub mean_error: f64,
    pub precision_bits: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trend {
    Decreasing,
    NotDecreasing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub function: String,
    pub sequence: Provenance,
    pub compact: CompactSet,
    pub points: Vec<CurvePoint>,
    pub trend: Trend,
}

/// `NotDecreasing` when the last error exceeds half the first or some error exceeds
/// ten times the first. Errors at or below `floor` count as converged.
pub fn classify_trend(sup_errors: &[f64], floor: f64) -> Trend {
    let (Some(&first), Some(&last)) = (sup_errors.first(), sup_errors.last()) else {
        return Trend::Decreasing;
    };
    if last <= floor {
        return Trend::Decreasing;
    }
    let spike = sup_errors.iter().any(|&e| e > 10.0 * first);
    if last > 0.5 * first || spike {
        Trend::NotDecreasing
    } else {
        Trend::Decreasing
    }
}

/// Sup and mean of `|E_N(f; η) - f|` over the grid of `compact` for each `N`.
///
/// `f` is its closed form where available, otherwise its Taylor polynomial through
/// degree `2M`.
pub fn convergence_experiment(
    f: &dyn BivariateTaylor,
    seq: &DirectionSequence,
    n_list: &[usize],
    compact: &CompactSet,
    opts: &ExperimentOptions,
) -> Result<ErrorCurve> {
    let prec = opts.precision;
    let grid = compact.grid(prec);
    let points = n_list
        .par_iter()
        .map(|&n| -> Result<CurvePoint> {
            let start = Instant::now();
            let m = opts
                .truncation
                .unwrap_or_else(|| default_truncation(n).max(f.degree().unwrap_or(0)));
            let op = Reconstructor::new(f, seq, n, m, prec)?;
            let reference = f.table(2 * m, prec);
            let errors: Vec<f64> = grid
                .iter()
                .map(|(z1, z2)| {
                    let v = op.eval_point(z1, z2);
                    let exact = f
                        .eval_closed_form(z1, z2)
                        .unwrap_or_else(|| reference.eval_range(z1, z2, 0, 2 * m));
                    (&v.e - &exact).abs_f64()
                })
                .collect();
            let sup_error = errors.iter().copied().fold(0.0, f64::max);
            let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
            Ok(CurvePoint {
                n,
                sup_error,
                mean_error,
                precision_bits: prec.bits(),
                m,
                wall_time_ms: opts.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sups: Vec<f64> = points.iter().map(|p| p.sup_error).collect();
    let trend = classify_trend(&sups, roundoff_unit(prec.bits()));
    Ok(ErrorCurve {
        function: f.describe(),
        sequence: seq.provenance().clone(),
        compact: *compact,
        points,
        trend,
    })
}
