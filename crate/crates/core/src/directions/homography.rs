//! Homographies `h_u(ζ) = (1 + conj(u) ζ) / (ζ - u)` and the two limit maps.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::sequence::{DirectionSequence, Provenance};
use crate::error::{Error, Result};
use crate::numerics::{Precision, PrecisionComplex};

#[derive(Clone, Debug, PartialEq)]
pub enum HomographyMap {
    /// `ζ ↦ ζ`
    Identity,
    /// `ζ ↦ 1/ζ`, the limit of `h_u` as `u → ∞` up to a unimodular factor.
    Reciprocal,
    /// `h_u` with finite pole `u`.
    Pole(PrecisionComplex),
}

impl HomographyMap {
    pub fn label(&self) -> String {
        match self {
            HomographyMap::Identity => "identity".into(),
            HomographyMap::Reciprocal => "reciprocal".into(),
            HomographyMap::Pole(u) => format!("pole:{u}"),
        }
    }

    /// Point the map sends to infinity, if any.
    fn pole(&self, prec: Precision) -> Option<PrecisionComplex> {
        match self {
            HomographyMap::Identity => None,
            HomographyMap::Reciprocal => Some(PrecisionComplex::zero(prec)),
            HomographyMap::Pole(u) => Some(u.clone()),
        }
    }

    pub fn apply(&self, z: &PrecisionComplex) -> PrecisionComplex {
        match self {
            HomographyMap::Identity => z.clone(),
            HomographyMap::Reciprocal => z.recip(),
            HomographyMap::Pole(u) => {
                let num = &PrecisionComplex::one(Precision::new(z.prec()).unwrap_or_default()) + &(&u.conj() * z);
                &num / &(z - u)
            }
        }
    }

    /// Inverse map; for `h_u` it is `w ↦ (1 + u w) / (w - conj(u))`.
    pub fn invert(&self, w: &PrecisionComplex) -> PrecisionComplex {
        match self {
            HomographyMap::Identity => w.clone(),
            HomographyMap::Reciprocal => w.recip(),
            HomographyMap::Pole(u) => {
                let num = &PrecisionComplex::one(Precision::new(w.prec()).unwrap_or_default()) + &(u * w);
                &num / &(w - &u.conj())
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MapRecord {
    map: String,
    delta: f64,
}

/// Applies `map` pointwise; fails with `PoleTooClose` if a point is within `delta` of the pole.
pub fn homography_map(seq: &DirectionSequence, map: &HomographyMap, delta: f64) -> Result<DirectionSequence> {
    if let Some(pole) = map.pole(seq.precision()) {
        for (i, z) in seq.points().iter().enumerate() {
            let distance = z.distance(&pole).to_f64();
            if distance < delta {
                return Err(Error::PoleTooClose {
                    index: i + 1,
                    distance,
                    delta,
                });
            }
        }
    }
    let points = seq.points().iter().map(|z| map.apply(z)).collect();
    Ok(DirectionSequence::new_unchecked(
        points,
        Provenance::new(
            "homography",
            json!({ "source": seq.provenance(), "map": MapRecord { map: map.label(), delta } }),
        ),
    ))
}

/// `h_u(η_j)` for every point.
pub fn homography(seq: &DirectionSequence, u: &PrecisionComplex, delta: f64) -> Result<DirectionSequence> {
    homography_map(seq, &HomographyMap::Pole(u.clone()), delta)
}

/// Inverse of [`homography`].
pub fn inverse_homography(seq: &DirectionSequence, u: &PrecisionComplex) -> DirectionSequence {
    let map = HomographyMap::Pole(u.clone());
    let points = seq.points().iter().map(|w| map.invert(w)).collect();
    DirectionSequence::new_unchecked(
        points,
        Provenance::new("inverse-homography", json!({ "source": seq.provenance(), "u": u.to_string() })),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::gen_theta;

    fn c(re: f64, im: f64) -> PrecisionComplex {
        PrecisionComplex::from_f64(re, im, Precision::DEFAULT)
    }

    #[test]
    fn examples() {
        let h = HomographyMap::Pole(c(3.0, 0.0));
        let v = h.apply(&c(0.0, 0.0));
        assert!((&v - &(&c(-1.0, 0.0) / &c(3.0, 0.0))).abs_f64() < 1e-70);
        let w = h.apply(&c(0.0, 1.0));
        let expected = &c(1.0, 3.0) / &c(-3.0, 1.0);
        assert!((&w - &expected).abs_f64() < 1e-70);
    }

    #[test]
    fn pole_guard() {
        let seq = gen_theta(4, Precision::DEFAULT);
        let err = homography(&seq, &c(0.0, 1.0), 1e-6).unwrap_err();
        assert!(matches!(err, Error::PoleTooClose { index: 1, .. }));
        assert!(homography_map(&seq, &HomographyMap::Reciprocal, 1e-6).is_ok());
    }

    #[test]
    fn inverse_recovers_points() {
        let seq = gen_theta(30, Precision::DEFAULT);
        let u = c(5.0, 0.0);
        let back = inverse_homography(&homography(&seq, &u, 1e-3).unwrap(), &u);
        for (a, b) in seq.points().iter().zip(back.points()) {
            let rel = (a - b).abs_f64() / a.abs_f64();
            assert!(rel < (-240f64).exp2());
        }
    }
}
