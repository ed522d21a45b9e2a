//! Reordering of an interleaved pair `(θ, κ)` that spaces the `θ` terms out
//! so the growth criterion holds for the result.
//!
//! Positions `1..=l_1` carry `κ_1..κ_{l_1}`; position `l_k + k` carries `θ_k`;
//! positions `l_k + k + 1 ..= l_{k+1} + k` carry `κ_{j-k}`.

use serde_json::json;

use super::permutation::Permutation;
use super::sequence::DirectionSequence;
use crate::error::{Error, Result};

/// Image index of `θ_k` inside `interleave(θ, κ)`.
pub fn theta_slot(k: usize) -> usize {
    2 * k
}

/// Image index of `κ_j` inside `interleave(θ, κ)`.
pub fn kappa_slot(j: usize) -> usize {
    2 * j - 1
}

#[derive(Clone, Debug)]
pub struct Sigma1 {
    /// Images index `interleave(θ, κ)`.
    pub permutation: Permutation,
    /// `l_0, l_1, …` as far as the prefix needs them.
    pub l: Vec<usize>,
    /// `min(2, dist(θ, κ))` over the supplied prefixes.
    pub d_theta_kappa: f64,
    pub r_kappa: f64,
    /// Positions (1-based) of `θ_1, θ_2, …` within the prefix.
    pub theta_positions: Vec<usize>,
}

/// `min(2, min |θ_i - κ_j|)` over the two prefixes.
pub fn separation(theta: &DirectionSequence, kappa: &DirectionSequence) -> f64 {
    let mut d: f64 = 2.0;
    for t in theta.points() {
        for k in kappa.points() {
            d = d.min(t.distance(k).to_f64());
        }
    }
    d
}

/// `φ_k(w) = min{1, min_{j≤k} |w - θ_j|, min_{i<j≤k} |θ_j - θ_i|}` for increasing `k`.
struct PhiTracker<'a> {
    theta: &'a [(f64, f64)],
    k: usize,
    pair_min: f64,
}

impl<'a> PhiTracker<'a> {
    fn new(theta: &'a [(f64, f64)]) -> Self {
        PhiTracker {
            theta,
            k: 0,
            pair_min: 1.0,
        }
    }

    /// Extends the prefix to `θ_1..θ_{k+1}`.
    fn push(&mut self) {
        let new = self.theta[self.k];
        for old in &self.theta[..self.k] {
            self.pair_min = self.pair_min.min(dist(*old, new));
        }
        self.k += 1;
    }

    fn eval(&self, w: (f64, f64)) -> f64 {
        self.theta[..self.k].iter().fold(self.pair_min, |m, t| m.min(dist(*t, w)))
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Materializes `σ_1(1..=n)`.
///
/// `l_k` is the smallest `l ≥ 1` with `l ≥ k · max(1, log2(d / (2 φ_k(θ_{k+1}) R_κ)))`,
/// raised where needed so that `l_0 = 1 < l_1 < l_2 < …`.
pub fn build_sigma1(
    theta: &DirectionSequence,
    kappa: &DirectionSequence,
    r_kappa: f64,
    n: usize,
) -> Result<Sigma1> {
    if !(r_kappa >= 1.0) {
        return Err(Error::InvalidArgument(format!("R_kappa must be at least 1, got {r_kappa}")));
    }
    let d = separation(theta, kappa);
    if !(d > 0.0) {
        return Err(Error::GapError { distance: d });
    }
    let th: Vec<(f64, f64)> = theta.points().iter().map(|z| z.to_f64_pair()).collect();
    let mut phi = PhiTracker::new(&th);
    let mut l = vec![1usize];
    // l_k is needed while θ_k still lands inside the prefix.
    for k in 1.. {
        if th.len() < k + 1 {
            return Err(Error::InsufficientNodes {
                needed: k + 1,
                available: th.len(),
            });
        }
        phi.push();
        let phi_k = phi.eval(th[k]);
        let ratio = (d / (2.0 * phi_k * r_kappa)).log2();
        let target = (k as f64 * ratio.max(1.0)).ceil() as usize;
        let lk = target.max(1).max(l[k - 1] + 1);
        l.push(lk);
        if lk + k > n {
            break;
        }
    }

    let mut images = Vec::with_capacity(n);
    let mut theta_positions = Vec::new();
    let mut k = 0usize;
    for j in 1..=n {
        while k + 1 < l.len() && l[k + 1] + k < j {
            k += 1;
        }
        let slot = if k >= 1 && j == l[k] + k {
            theta_positions.push(j);
            theta_slot(k)
        } else {
            let idx = j - k;
            if idx > kappa.len() {
                return Err(Error::InsufficientNodes {
                    needed: idx,
                    available: kappa.len(),
                });
            }
            kappa_slot(idx)
        };
        images.push(slot);
    }
    let permutation = Permutation::from_images(
        "sigma1",
        images,
        json!({ "R_kappa": r_kappa, "d_theta_kappa": d, "l": l }),
    )?;
    Ok(Sigma1 {
        permutation,
        l,
        d_theta_kappa: d,
        r_kappa,
        theta_positions,
    })
}
