//! The growth criterion on images of a sequence under homographies.

use serde::Serialize;

use crate::directions::{homography_map, DirectionSequence, HomographyMap};
use crate::divided_differences::{criterion_matrix, CriterionOptions, CriterionReport, Verdict};
use crate::error::Result;
use crate::numerics::PrecisionComplex;

#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub map: String,
    pub report: CriterionReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomographyCriterion {
    pub maps: Vec<MapReport>,
    /// `BOUNDED` only if every map is; `GROWING` if any map is; else `INCONCLUSIVE`.
    pub combined: Verdict,
}

/// Criterion reports for `ζ ↦ ζ`, `ζ ↦ 1/ζ` and `h_u` for each `u`, on the first `p_max + 1`
/// points. Fails with `PoleTooClose` if a point lies within `delta` of a pole.
pub fn criterion_under_homography(
    seq: &DirectionSequence,
    u_list: &[PrecisionComplex],
    p_max: usize,
    q_max: u32,
    delta: f64,
    opts: &CriterionOptions,
) -> Result<HomographyCriterion> {
    let prefix = seq.prefix(p_max + 1);
    let mut maps = vec![HomographyMap::Identity, HomographyMap::Reciprocal];
    maps.extend(u_list.iter().cloned().map(HomographyMap::Pole));
    let mut out = Vec::with_capacity(maps.len());
    for map in &maps {
        let image = homography_map(&prefix, map, delta)?;
        out.push(MapReport {
            map: map.label(),
            report: criterion_matrix(&image, p_max, q_max, opts)?,
        });
    }
    let verdicts: Vec<Verdict> = out.iter().map(|m| m.report.verdict).collect();
    let combined = if verdicts.contains(&Verdict::Growing) {
        Verdict::Growing
    } else if verdicts.iter().all(|&v| v == Verdict::Bounded) {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    };
    Ok(HomographyCriterion { maps: out, combined })
}
