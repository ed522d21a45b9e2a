//! Numeration of a dense sequence annulus by annulus.
//!
//! `C_r = {r-1 < ‖ζ‖_∞ ≤ r}` for `r ≥ 2` and `C_1 = {‖ζ‖_∞ ≤ 1}`. Inside each
//! annulus points come in nested perturbed `2^-k` nets; annuli are interleaved so
//! that after every step `⌈c_r/2⌉ - 1 ≤ c_{r+1} ≤ c_r/2`, where `c_r` counts the
//! outputs in `C_r`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::net::{NetLevel, NetPlan, Region};
use super::permutation::Permutation;
use super::sequence::{annulus_index, gen_dense, DirectionSequence, Provenance};
use crate::error::{Error, Result};
use crate::numerics::Precision;

/// Smallest level at which a forced point may join.
pub const FORCED_LEVEL_FLOOR: u32 = 3;
/// Finest level tried before an annulus counts as exhausted.
const MAX_LEVEL: u32 = 48;
const CELL: f64 = 1.0 / 16.0;

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct SigmaCOptions {
    /// Skips the coarse density check on the input.
    pub skip_density_check: bool,
}

#[derive(Clone, Debug)]
pub struct SigmaC {
    /// Images index the input sequence.
    pub permutation: Permutation,
    /// Annulus of each output, in output order.
    pub annuli: Vec<u32>,
    /// Net levels built per annulus, keyed by `r`.
    pub nets: BTreeMap<u32, NetPlan>,
}

impl SigmaC {
    /// `c_r` after the first `n` outputs, indexed by `r` (entry 0 unused).
    pub fn counts(&self, n: usize) -> Vec<usize> {
        annulus_counts(&self.annuli[..n.min(self.annuli.len())])
    }
}

/// Per-annulus counts of a list of annulus indices, indexed by `r`.
pub fn annulus_counts(annuli: &[u32]) -> Vec<usize> {
    let top = annuli.iter().copied().max().unwrap_or(0) as usize;
    let mut c = vec![0usize; top + 1];
    for &r in annuli {
        c[r as usize] += 1;
    }
    c
}

/// Whether `⌈c_r/2⌉ - 1 ≤ c_{r+1} ≤ c_r/2` holds for every `r ≥ 1` with `c_r > 0`.
pub fn satisfies_halving(counts: &[usize]) -> bool {
    (1..counts.len()).all(|r| {
        let cr = counts[r];
        let next = counts.get(r + 1).copied().unwrap_or(0);
        cr == 0 && next == 0 || cr > 0 && cr.div_ceil(2) - 1 <= next && 2 * next <= cr
    })
}

/// Annulus receiving the next output given the current counts.
///
/// With `r_N` the outermost occupied annulus: start in `C_1`; open `C_{r_N+1}` once
/// `c_{r_N} = 2`; otherwise feed the outermost `C_s`, `2 ≤ s ≤ r_N`, with
/// `c_{s-1} = 2 c_s + 2`; otherwise feed `C_1`.
pub fn next_annulus(counts: &[usize]) -> u32 {
    let r_n = (1..counts.len()).rev().find(|&r| counts[r] > 0).unwrap_or(0);
    if r_n == 0 {
        return 1;
    }
    if counts[r_n] == 2 {
        return r_n as u32 + 1;
    }
    (2..=r_n)
        .rev()
        .find(|&s| counts[s - 1] == 2 * counts[s] + 2)
        .map_or(1, |s| s as u32)
}

/// Number of the 64 half-unit cells of `[-2, 2]^2` containing no point.
pub fn density_gaps(seq: &DirectionSequence) -> usize {
    let mut hit = [false; 64];
    for z in seq.points() {
        let (x, y) = z.to_f64_pair();
        if !(-2.0..=2.0).contains(&x) || !(-2.0..=2.0).contains(&y) {
            continue;
        }
        let cx = (((x + 2.0) * 2.0).floor() as usize).min(7);
        let cy = (((y + 2.0) * 2.0).floor() as usize).min(7);
        hit[cx * 8 + cy] = true;
    }
    hit.iter().filter(|&&h| !h).count()
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn cell_of(p: (f64, f64)) -> (i64, i64) {
    ((p.0 / CELL).floor() as i64, (p.1 / CELL).floor() as i64)
}

/// Members placed so far, bucketed on a fixed grid.
#[derive(Default)]
struct MemberGrid {
    cells: HashMap<(i64, i64), Vec<(f64, f64)>>,
}

impl MemberGrid {
    fn insert(&mut self, p: (f64, f64)) {
        self.cells.entry(cell_of(p)).or_default().push(p);
    }

    /// Distance to the nearest member, capped at `radius`.
    fn nearest_within(&self, p: (f64, f64), radius: f64) -> f64 {
        let reach = (radius / CELL).ceil() as i64;
        let (cx, cy) = cell_of(p);
        let mut best = radius;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(v) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &q in v {
                        best = best.min(dist(p, q));
                    }
                }
            }
        }
        best
    }
}

/// Lazily emits the points of one annulus, one net level per refill.
struct AnnulusOrderer {
    r: u32,
    /// Pool indices (0-based) in the annulus, ascending.
    pool: Vec<usize>,
    used: HashMap<usize, bool>,
    cursor: usize,
    members: MemberGrid,
    level: u32,
    queue: VecDeque<usize>,
    forced: Option<usize>,
    levels: Vec<NetLevel>,
}

impl AnnulusOrderer {
    fn new(r: u32, pool: Vec<usize>) -> Self {
        AnnulusOrderer {
            r,
            used: pool.iter().map(|&i| (i, false)).collect(),
            pool,
            cursor: 0,
            members: MemberGrid::default(),
            level: 0,
            queue: VecDeque::new(),
            forced: None,
            levels: Vec::new(),
        }
    }

    fn first_unused(&mut self) -> Option<usize> {
        while self.cursor < self.pool.len() && self.used[&self.pool[self.cursor]] {
            self.cursor += 1;
        }
        self.pool.get(self.cursor).copied()
    }

    fn in_level(&self, node: (i64, i64), k: u32) -> bool {
        let scale = (1i64 << k) as f64;
        let z = (node.0 as f64 / scale, node.1 as f64 / scale);
        let sup = z.0.abs().max(z.1.abs());
        let r = f64::from(self.r);
        let inside = if self.r == 1 { sup <= 1.0 } else { sup > r - 1.0 && sup <= r };
        inside && (k == 1 || node.0 % 2 != 0 || node.1 % 2 != 0)
    }

    /// Builds level `level + 1` and queues its members.
    fn refill(&mut self, xy: &[(f64, f64)]) -> Result<bool> {
        loop {
            if self.first_unused().is_none() {
                return Ok(false);
            }
            if self.level >= MAX_LEVEL {
                return Err(Error::InvalidArgument(format!(
                    "annulus {} did not separate its points by level {MAX_LEVEL}",
                    self.r
                )));
            }
            let k = self.level + 1;
            self.level = k;
            let spacing = (-f64::from(k)).exp2();
            let mut added = Vec::new();

            if let Some(f) = self.forced {
                if self.used[&f] {
                    self.forced = None;
                } else if k >= FORCED_LEVEL_FLOOR {
                    let p = xy[f];
                    let inner = if self.r == 1 {
                        f64::INFINITY
                    } else {
                        p.0.abs().max(p.1.abs()) - f64::from(self.r - 1)
                    };
                    let gap = inner.min(self.members.nearest_within(p, spacing));
                    if gap >= spacing {
                        added.push(f);
                        self.members.insert(p);
                        self.used.insert(f, true);
                        self.forced = None;
                    }
                }
            }

            // Candidates per node: pool points within 2^-(k+2), smallest index first.
            let scale = (1i64 << k) as f64;
            let reach = spacing / 4.0;
            let mut candidates: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
            for &i in &self.pool {
                if self.used[&i] {
                    continue;
                }
                let p = xy[i];
                let node = ((p.0 * scale).round() as i64, (p.1 * scale).round() as i64);
                let nz = (node.0 as f64 / scale, node.1 as f64 / scale);
                if dist(p, nz) <= reach && self.in_level(node, k) {
                    candidates.entry(node).or_default().push(i);
                }
            }
            let mut fresh = Vec::new();
            for (_, cands) in candidates {
                if let Some(&i) = cands
                    .iter()
                    .find(|&&i| self.members.nearest_within(xy[i], spacing / 2.0) >= spacing / 2.0)
                {
                    self.members.insert(xy[i]);
                    self.used.insert(i, true);
                    fresh.push(i);
                }
            }
            fresh.sort_by(|&a, &b| xy[a].partial_cmp(&xy[b]).expect("finite coordinates"));
            added.extend(fresh);

            if self.forced.is_none() {
                self.forced = self.first_unused();
            }
            if !added.is_empty() {
                self.queue.extend(added.iter().copied());
                self.levels.push(NetLevel {
                    k,
                    members: added.iter().map(|i| i + 1).collect(),
                });
                return Ok(true);
            }
        }
    }

    fn next(&mut self, xy: &[(f64, f64)]) -> Result<Option<usize>> {
        if self.queue.is_empty() && !self.refill(xy)? {
            return Ok(None);
        }
        Ok(self.queue.pop_front())
    }
}

/// Materializes `σ_c(1..=n)` over `seq`.
///
/// Fails with `DensityError` if some half-unit cell of `[-2, 2]^2` holds no point
/// (unless skipped) and with `InsufficientNodes` if an annulus runs dry.
pub fn build_sigma_c(seq: &DirectionSequence, n: usize, opts: &SigmaCOptions) -> Result<SigmaC> {
    if !opts.skip_density_check {
        let empty_cells = density_gaps(seq);
        if empty_cells > 0 {
            return Err(Error::DensityError { empty_cells });
        }
    }
    let xy: Vec<(f64, f64)> = seq.points().iter().map(|z| z.to_f64_pair()).collect();
    let mut by_annulus: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, z) in seq.points().iter().enumerate() {
        by_annulus.entry(annulus_index(z)).or_default().push(i);
    }
    let mut orderers: BTreeMap<u32, AnnulusOrderer> = BTreeMap::new();
    let mut counts = vec![0usize];
    let mut images = Vec::with_capacity(n);
    let mut annuli = Vec::with_capacity(n);
    while images.len() < n {
        let r = next_annulus(&counts);
        let orderer = orderers
            .entry(r)
            .or_insert_with(|| AnnulusOrderer::new(r, by_annulus.remove(&r).unwrap_or_default()));
        let Some(i) = orderer.next(&xy)? else {
            return Err(Error::InsufficientNodes {
                needed: n,
                available: images.len(),
            });
        };
        images.push(i + 1);
        annuli.push(r);
        if counts.len() <= r as usize {
            counts.resize(r as usize + 1, 0);
        }
        counts[r as usize] += 1;
    }
    let nets = orderers
        .into_iter()
        .map(|(r, o)| {
            (
                r,
                NetPlan {
                    levels: o.levels,
                    region: Region::Annulus { r },
                },
            )
        })
        .collect();
    let permutation = Permutation::from_images(
        "sigma-c",
        images,
        json!({ "forced_level_floor": FORCED_LEVEL_FLOOR, "source": seq.provenance() }),
    )?;
    Ok(SigmaC {
        permutation,
        annuli,
        nets,
    })
}

/// `σ_c` applied to a dyadic dense pool, doubling the pool until every annulus suffices.
pub fn gen_sigma_c_sequence(n: usize, prec: Precision) -> Result<(DirectionSequence, SigmaC)> {
    let mut pool_size = (4 * n).max(256);
    loop {
        let pool = gen_dense(pool_size, prec);
        match build_sigma_c(&pool, n, &SigmaCOptions::default()) {
            Ok(sc) => {
                let seq = super::sequence::apply_permutation(&pool, &sc.permutation, n)?
                    .with_provenance(Provenance::new(
                        "dense-sigma-c",
                        json!({ "count": n, "pool": pool_size }),
                    ));
                return Ok((seq, sc));
            }
            Err(Error::InsufficientNodes { .. }) => pool_size *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_opens_annuli_in_order() {
        let mut counts = vec![0usize];
        let mut seq = Vec::new();
        for _ in 0..7 {
            let r = next_annulus(&counts) as usize;
            if counts.len() <= r {
                counts.resize(r + 1, 0);
            }
            counts[r] += 1;
            seq.push(r);
        }
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 3]);
    }

    #[test]
    fn halving_holds_at_every_prefix() {
        let mut counts = vec![0usize];
        for _ in 0..5000 {
            let r = next_annulus(&counts) as usize;
            if counts.len() <= r {
                counts.resize(r + 1, 0);
            }
            counts[r] += 1;
            assert!(satisfies_halving(&counts), "{counts:?}");
        }
    }

    #[test]
    fn first_outputs_and_nets() {
        let (seq, sc) = gen_sigma_c_sequence(200, Precision::DEFAULT).unwrap();
        assert_eq!(&sc.annuli[..3], &[1, 1, 2]);
        assert!(sc.permutation.is_injective());
        for (z, &r) in seq.points().iter().zip(&sc.annuli) {
            assert_eq!(annulus_index(z), r);
        }
        for plan in sc.nets.values() {
            assert!(plan.is_nested());
        }
    }

    #[test]
    fn density_check_rejects_sparse_input() {
        let seq = crate::directions::gen_theta(40, Precision::DEFAULT);
        assert!(matches!(
            build_sigma_c(&seq, 5, &SigmaCOptions::default()),
            Err(Error::DensityError { .. })
        ));
    }

    #[test]
    fn pool_is_eventually_exhausted_in_order() {
        // Every point of a finite annulus pool is emitted exactly once.
        let pool = gen_dense(600, Precision::DEFAULT);
        let c1: Vec<usize> = pool
            .points()
            .iter()
            .enumerate()
            .filter(|(_, z)| annulus_index(z) == 1)
            .map(|(i, _)| i)
            .collect();
        let xy: Vec<(f64, f64)> = pool.points().iter().map(|z| z.to_f64_pair()).collect();
        let mut o = AnnulusOrderer::new(1, c1.clone());
        let mut out = Vec::new();
        while let Some(i) = o.next(&xy).unwrap() {
            out.push(i);
        }
        out.sort_unstable();
        assert_eq!(out, c1);
    }
}
