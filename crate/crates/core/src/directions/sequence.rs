//! Direction sequences and the named generators.

use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::net::{NetLevel, NetPlan, Region};
use super::permutation::Permutation;
use crate::error::{Error, Result};
use crate::numerics::{Precision, PrecisionComplex};

/// Generator name and parameters a sequence was produced from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(default)]
    pub params: Value,
}

impl Provenance {
    pub fn new(generator: impl Into<String>, params: Value) -> Self {
        Provenance {
            generator: generator.into(),
            params,
        }
    }
}

/// Finite prefix of pairwise distinct directions `η_1, η_2, …` (index 1 is `points()[0]`).
#[derive(Clone, Debug)]
pub struct DirectionSequence {
    points: Vec<PrecisionComplex>,
    provenance: Provenance,
}

impl DirectionSequence {
    /// Fails with `DuplicateNode` if two points are equal.
    pub fn new(points: Vec<PrecisionComplex>, provenance: Provenance) -> Result<Self> {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].lex_cmp(&points[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (first, second) = (w[0].min(w[1]) + 1, w[0].max(w[1]) + 1);
                return Err(Error::DuplicateNode {
                    first,
                    second,
                    gap: 0.0,
                    threshold: 0.0,
                });
            }
        }
        Ok(DirectionSequence { points, provenance })
    }

    pub(crate) fn new_unchecked(points: Vec<PrecisionComplex>, provenance: Provenance) -> Self {
        DirectionSequence { points, provenance }
    }

    pub fn points(&self) -> &[PrecisionComplex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `η_j` for 1-based `j`.
    pub fn get(&self, j: usize) -> Option<&PrecisionComplex> {
        j.checked_sub(1).and_then(|i| self.points.get(i))
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn precision(&self) -> Precision {
        let bits = self.points.iter().map(PrecisionComplex::prec).max().unwrap_or(0);
        Precision::new(bits).unwrap_or_default()
    }

    /// First `n` points, same provenance.
    pub fn prefix(&self, n: usize) -> DirectionSequence {
        DirectionSequence {
            points: self.points[..n.min(self.len())].to_vec(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Minimum pairwise distance over the prefix (`inf` for fewer than two points).
    ///
    /// Plane sweep on `f64` coordinates.
    pub fn distinctness_gap(&self) -> f64 {
        let xy: Vec<(f64, f64)> = self.points.iter().map(PrecisionComplex::to_f64_pair).collect();
        min_pairwise_distance(&xy)
    }

    /// Bounding box `(re_min, re_max, im_min, im_max)`.
    pub fn bounding_box(&self) -> Option<(f64, f64, f64, f64)> {
        let mut it = self.points.iter().map(PrecisionComplex::to_f64_pair);
        let (x, y) = it.next()?;
        Some(it.fold((x, x, y, y), |(a, b, c, d), (x, y)| (a.min(x), b.max(x), c.min(y), d.max(y))))
    }
}

pub(crate) fn min_pairwise_distance(xy: &[(f64, f64)]) -> f64 {
    let mut pts = xy.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0 - pts[i].0 >= best {
                break;
            }
            best = best.min((pts[j].0 - pts[i].0).hypot(pts[j].1 - pts[i].1));
        }
    }
    best
}

/// `θ_j = i^j / j` for `j = 1..=n`.
pub fn gen_theta(n: usize, prec: Precision) -> DirectionSequence {
    let points = (1..=n)
        .map(|j| {
            let inv = Float::with_val(prec.bits(), 1) / Float::with_val(prec.bits(), j);
            let zero = Float::new(prec.bits());
            match j % 4 {
                1 => PrecisionComplex::from_parts(zero, inv),
                2 => PrecisionComplex::from_parts(-inv, zero),
                3 => PrecisionComplex::from_parts(zero, -inv),
                _ => PrecisionComplex::from_parts(inv, zero),
            }
        })
        .collect();
    DirectionSequence::new_unchecked(points, Provenance::new("theta", json!({ "count": n })))
}

/// `κ_j = 3 + sin j` for `j = 1..=n`.
pub fn gen_kappa(n: usize, prec: Precision) -> DirectionSequence {
    let points = (1..=n)
        .map(|j| {
            let s = Float::with_val(prec.bits(), j).sin();
            PrecisionComplex::from_real(s + 3u32)
        })
        .collect();
    DirectionSequence::new_unchecked(points, Provenance::new("kappa", json!({ "count": n })))
}

/// Numerators `(s, t)` of the square-net points `(s + it) / 2^level`, in enumeration order,
/// for the first `n` points.
pub(crate) fn square_net_numerators(n: usize) -> Vec<(u64, u64, u32)> {
    let mut out: Vec<(u64, u64, u32)> = vec![(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)];
    // Level one has a fixed listing; deeper levels are lexicographic.
    out.extend([(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 1, 1), (1, 2, 1)]);
    let mut level = 2u32;
    while out.len() < n {
        let side = 1u64 << level;
        for s in 0..=side {
            for t in 0..=side {
                if s % 2 == 1 || t % 2 == 1 {
                    out.push((s, t, level));
                }
            }
        }
        level += 1;
    }
    out.truncate(n);
    out
}

/// Number of points of the level-`r` square net `{(s+it)/2^r : 0 ≤ s,t ≤ 2^r}`.
pub fn square_net_size(r: u32) -> usize {
    let side = (1usize << r) + 1;
    side * side
}

/// Nested dyadic nets of the unit square, each level completed before the next.
///
/// For every `r`, the first `(2^r + 1)^2` points form the level-`r` net.
pub fn gen_square_net_sequence(n: usize, prec: Precision) -> DirectionSequence {
    let points = square_net_numerators(n)
        .into_iter()
        .map(|(s, t, r)| {
            let re = Float::with_val(prec.bits(), s) >> r;
            let im = Float::with_val(prec.bits(), t) >> r;
            PrecisionComplex::from_parts(re, im)
        })
        .collect();
    DirectionSequence::new_unchecked(points, Provenance::new("square-net", json!({ "count": n })))
}

/// Level structure of the square-net sequence through level `max_level`.
pub fn square_net_plan(max_level: u32) -> NetPlan {
    let levels = (0..=max_level)
        .map(|k| {
            let lo = if k == 0 { 0 } else { square_net_size(k - 1) };
            NetLevel {
                k,
                members: (lo + 1..=square_net_size(k)).collect(),
            }
        })
        .collect();
    NetPlan {
        levels,
        region: Region::UnitSquare,
    }
}

/// Annulus index `max(1, ⌈‖ζ‖_∞⌉)`; points with `‖ζ‖_∞ = r` belong to annulus `r`.
pub fn annulus_index(z: &PrecisionComplex) -> u32 {
    let sup = z.sup_norm();
    let c = sup.ceil();
    c.to_u32_saturating().unwrap_or(u32::MAX).max(1)
}

/// Dyadic Gaussian rationals enumerated by the key `t = r + 3 e`, where `r` is the
/// annulus index and `2^-e` the exact denominator; ties by `(e, Re, Im)`.
///
/// Every dyadic point eventually appears, so the sequence is dense in C.
pub fn gen_dense(n: usize, prec: Precision) -> DirectionSequence {
    let mut nums: Vec<(i64, i64, u32)> = Vec::with_capacity(n);
    let mut t = 1u32;
    'outer: loop {
        for e in 0..=(t - 1) / 3 {
            let r = t - 3 * e;
            let scale = 1i64 << e;
            let lim = i64::from(r) * scale;
            for a in -lim..=lim {
                for b in -lim..=lim {
                    if e > 0 && a % 2 == 0 && b % 2 == 0 {
                        continue;
                    }
                    let sup = a.abs().max(b.abs());
                    let inner = i64::from(r - 1) * scale;
                    if r > 1 && sup <= inner {
                        continue;
                    }
                    nums.push((a, b, e));
                    if nums.len() == n {
                        break 'outer;
                    }
                }
            }
        }
        t += 1;
    }
    let points = nums
        .into_iter()
        .map(|(a, b, e)| {
            let re = Float::with_val(prec.bits(), a) >> e;
            let im = Float::with_val(prec.bits(), b) >> e;
            PrecisionComplex::from_parts(re, im)
        })
        .collect();
    DirectionSequence::new_unchecked(points, Provenance::new("dense", json!({ "count": n })))
}

/// Merges two sequences: odd positions from `b`, even positions from `a`.
///
/// Stops at the first position whose source is exhausted.
pub fn interleave(a: &DirectionSequence, b: &DirectionSequence) -> Result<DirectionSequence> {
    let mut sorted: Vec<usize> = (0..a.len()).collect();
    sorted.sort_by(|&x, &y| a.points[x].lex_cmp(&a.points[y]));
    for (j, z) in b.points.iter().enumerate() {
        if let Ok(pos) = sorted.binary_search_by(|&x| a.points[x].lex_cmp(z)) {
            return Err(Error::OverlapError {
                first: sorted[pos] + 1,
                second: j + 1,
            });
        }
    }
    let mut points = Vec::with_capacity(a.len() + b.len());
    for j in 1.. {
        let src = if j % 2 == 1 { b.points.get(j / 2) } else { a.points.get(j / 2 - 1) };
        match src {
            Some(z) => points.push(z.clone()),
            None => break,
        }
    }
    Ok(DirectionSequence::new_unchecked(
        points,
        Provenance::new(
            "interleave",
            json!({ "even": a.provenance, "odd": b.provenance }),
        ),
    ))
}

/// Removes every 1-based index for which `victim` holds, keeping relative order.
pub fn delete_subsequence<F>(seq: &DirectionSequence, victim: F) -> DirectionSequence
where
    F: Fn(usize) -> bool,
{
    let points = seq
        .points
        .iter()
        .enumerate()
        .filter(|(i, _)| !victim(i + 1))
        .map(|(_, z)| z.clone())
        .collect();
    DirectionSequence::new_unchecked(
        points,
        Provenance::new("delete", json!({ "source": seq.provenance })),
    )
}

/// `(η_{σ(1)}, …, η_{σ(n)})`.
pub fn apply_permutation(seq: &DirectionSequence, sigma: &Permutation, n: usize) -> Result<DirectionSequence> {
    if sigma.len() < n {
        return Err(Error::IndexOverflow {
            requested: n,
            available: sigma.len(),
        });
    }
    let points = sigma.images()[..n]
        .iter()
        .map(|&j| {
            seq.get(j).cloned().ok_or(Error::IndexOverflow {
                requested: j,
                available: seq.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionSequence::new_unchecked(
        points,
        Provenance::new(
            "permuted",
            json!({ "source": seq.provenance, "permutation": sigma.label(), "params": sigma.params() }),
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    fn pairs(seq: &DirectionSequence) -> Vec<(f64, f64)> {
        seq.points().iter().map(PrecisionComplex::to_f64_pair).collect()
    }

    #[test]
    fn theta_prefix() {
        assert_eq!(pairs(&gen_theta(1, p())), vec![(0.0, 1.0)]);
        let v = pairs(&gen_theta(4, p()));
        assert_eq!(v[..2], [(0.0, 1.0), (-0.5, 0.0)]);
        assert_eq!(v[3], (0.25, 0.0));
        assert!((v[2].1 + 1.0 / 3.0).abs() < 1e-16 && v[2].0 == 0.0);
    }

    #[test]
    fn kappa_range_and_first_value() {
        let k = gen_kappa(50, p());
        let first = k.points()[0].re().to_f64();
        assert!((first - 3.841_470_984_807_897).abs() < 1e-15);
        for z in k.points() {
            let x = z.re().to_f64();
            assert!((2.0..=4.0).contains(&x) && z.im().is_zero());
        }
        assert!(DirectionSequence::new(k.points().to_vec(), k.provenance().clone()).is_ok());
    }

    #[test]
    fn square_net_prefix_matches_listing() {
        let v = pairs(&gen_square_net_sequence(9, p()));
        assert_eq!(
            v,
            vec![
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 1.0),
                (0.0, 1.0),
                (0.5, 0.0),
                (0.0, 0.5),
                (0.5, 0.5),
                (1.0, 0.5),
                (0.5, 1.0)
            ]
        );
        assert_eq!(square_net_size(2), 25);
    }

    #[test]
    fn square_net_levels_are_nets() {
        let n = square_net_size(6);
        let seq = gen_square_net_sequence(n, p());
        for r in 0..=6u32 {
            let m = square_net_size(r);
            let prefix = seq.prefix(m);
            // exact dyadic grid of spacing 2^-r
            let gap = prefix.distinctness_gap();
            if m > 1 {
                assert_eq!(gap, (-f64::from(r)).exp2(), "r={r}");
            }
            for z in prefix.points() {
                let (x, y) = z.to_f64_pair();
                let s = f64::from(1u32 << r);
                assert_eq!((x * s).fract(), 0.0);
                assert_eq!((y * s).fract(), 0.0);
            }
        }
        let plan = square_net_plan(6);
        assert!(plan.is_nested());
        assert_eq!(plan.members_through(2).len(), 25);
    }

    #[test]
    fn dense_enumeration_is_distinct_and_starts_in_unit_square() {
        let d = gen_dense(2000, p());
        assert_eq!(d.len(), 2000);
        assert!(d.distinctness_gap() > 0.0);
        assert!(d.points()[..9].iter().all(|z| annulus_index(z) == 1));
    }

    #[test]
    fn annulus_boundaries_are_inner() {
        let z = |x, y| PrecisionComplex::from_f64(x, y, p());
        assert_eq!(annulus_index(&z(0.0, 0.0)), 1);
        assert_eq!(annulus_index(&z(1.0, -1.0)), 1);
        assert_eq!(annulus_index(&z(1.0, 1.5)), 2);
        assert_eq!(annulus_index(&z(-2.0, 0.0)), 2);
        assert_eq!(annulus_index(&z(2.25, 0.0)), 3);
    }

    #[test]
    fn interleave_positions() {
        let th = gen_theta(1, p());
        let ka = gen_kappa(2, p());
        let m = interleave(&th, &ka).unwrap();
        assert_eq!(m.points(), [ka.points()[0].clone(), th.points()[0].clone(), ka.points()[1].clone()]);
        let empty = gen_theta(0, p());
        assert_eq!(interleave(&empty, &gen_kappa(1, p())).unwrap().len(), 1);
        let full = interleave(&gen_theta(10, p()), &gen_kappa(10, p())).unwrap();
        assert_eq!(full.len(), 20);
        assert!(matches!(interleave(&th, &th), Err(Error::OverlapError { first: 1, second: 1 })));
    }

    #[test]
    fn deletion() {
        let th = gen_theta(8, p());
        let ka = gen_kappa(8, p());
        let m = interleave(&th, &ka).unwrap();
        assert_eq!(delete_subsequence(&m, |j| j % 2 == 0).points(), ka.points());
        assert_eq!(delete_subsequence(&m, |_| false).points(), m.points());
        assert_eq!(delete_subsequence(&m, |j| j > 3).points(), &m.points()[..3]);
    }

    #[test]
    fn permutation_application() {
        let th = gen_theta(5, p());
        let id = Permutation::identity(5);
        assert_eq!(apply_permutation(&th, &id, 5).unwrap().points(), th.points());
        let swap = Permutation::from_images("swap", vec![2, 1, 3], Value::Null).unwrap();
        let s = apply_permutation(&th, &swap, 3).unwrap();
        assert_eq!(s.points()[0], th.points()[1]);
        assert_eq!(s.points()[1], th.points()[0]);
        assert!(matches!(apply_permutation(&th, &swap, 4), Err(Error::IndexOverflow { .. })));
        let far = Permutation::from_images("far", vec![9], Value::Null).unwrap();
        assert!(matches!(apply_permutation(&th, &far, 1), Err(Error::IndexOverflow { requested: 9, .. })));
    }

    #[test]
    fn duplicates_rejected() {
        let z = PrecisionComplex::from_f64(0.5, 0.5, p());
        let r = DirectionSequence::new(vec![z.clone(), PrecisionComplex::zero(p()), z], Provenance::new("x", Value::Null));
        assert!(matches!(r, Err(Error::DuplicateNode { first: 1, second: 3, .. })));
    }
}
