//! Divergence witnesses and the reordering of `(θ, κ)` that keeps them.
//!
//! `θ^{(r)}` is `θ^{(r-1)}` with `κ_r` inserted at position `p_r + 2`, so every
//! witness `(p_r, q_r)` found on `θ^{(r-1)}` survives in `θ^{(r)}`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::permutation::Permutation;
use super::sequence::{DirectionSequence, Provenance};
use super::sigma1::{kappa_slot, theta_slot};
use crate::divided_differences::{criterion_values_dual, CriterionOptions};
use crate::error::{Error, Result};

/// A pair `(p, q)` with `|Δ_p[φ^q](η_{p+1})| ≥ base^{p+q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub p: usize,
    pub q: u32,
    /// `ln |Δ_p[φ^q](η_{p+1})|`
    pub log_value: f64,
    pub base: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub witnesses: Vec<Witness>,
    pub base: f64,
    pub p_budget: usize,
    pub q_budget: u32,
    /// Set when the two precisions still disagreed at the largest precision tried.
    pub precision_warning: bool,
    pub max_discrepancy: f64,
}

/// Every `(p, q)` with `1 ≤ p ≤ p_budget`, `1 ≤ q ≤ q_budget` whose criterion entry
/// reaches `base^{p+q}`, ordered by `(p, q)`.
pub fn find_divergence_witnesses(
    seq: &DirectionSequence,
    base: f64,
    p_budget: usize,
    q_budget: u32,
    opts: &CriterionOptions,
) -> Result<WitnessSearch> {
    if p_budget == 0 || q_budget == 0 {
        return Err(Error::InvalidArgument("witness budgets must be at least 1".into()));
    }
    if !(base > 0.0) {
        return Err(Error::InvalidArgument(format!("growth base must be positive, got {base}")));
    }
    let dual = criterion_values_dual(seq.points(), p_budget, q_budget, opts)?;
    let lb = base.ln();
    let mut witnesses = Vec::new();
    for (p, row) in dual.high.iter().enumerate().skip(1) {
        for (q, v) in row.iter().enumerate().skip(1) {
            let m = v.abs();
            if m.is_zero() {
                continue;
            }
            let lm = m.ln().to_f64();
            if lm >= lb * (p + q) as f64 {
                witnesses.push(Witness {
                    p,
                    q: q as u32,
                    log_value: lm,
                    base,
                });
            }
        }
    }
    Ok(WitnessSearch {
        witnesses,
        base,
        p_budget,
        q_budget,
        precision_warning: !dual.converged,
        max_discrepancy: dual.max_discrepancy,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Theta(usize),
    Kappa(usize),
}

fn check_witnesses(witnesses: &[(usize, u32)]) -> Result<()> {
    for (r, &(p, q)) in witnesses.iter().enumerate() {
        if p == 0 || q == 0 {
            return Err(Error::WitnessOrderError {
                position: r + 1,
                reason: "p and q must be at least 1".into(),
            });
        }
        if r > 0 {
            let (pp, pq) = witnesses[r - 1];
            if p < pp + 2 {
                return Err(Error::WitnessOrderError {
                    position: r + 1,
                    reason: format!("p = {p} must be at least {} (previous p plus 2)", pp + 2),
                });
            }
            if p + q as usize <= pp + pq as usize {
                return Err(Error::WitnessOrderError {
                    position: r + 1,
                    reason: format!("p + q = {} must exceed the previous {}", p + q as usize, pp + pq as usize),
                });
            }
        }
    }
    Ok(())
}

/// First `len` slots of `θ^{(w)}`.
fn inserted_slots(witnesses: &[(usize, u32)], len: usize) -> Vec<Slot> {
    let mut slots: Vec<Slot> = (1..=len).map(Slot::Theta).collect();
    for (r, &(p, _)) in witnesses.iter().enumerate() {
        let at = p + 1;
        if at <= slots.len() {
            slots.insert(at, Slot::Kappa(r + 1));
        }
    }
    slots.truncate(len);
    slots
}

fn resolve<'a>(slot: Slot, theta: &'a DirectionSequence, kappa: &'a DirectionSequence) -> Result<&'a crate::PrecisionComplex> {
    let (seq, j) = match slot {
        Slot::Theta(j) => (theta, j),
        Slot::Kappa(j) => (kappa, j),
    };
    seq.get(j).ok_or(Error::InsufficientNodes {
        needed: j,
        available: seq.len(),
    })
}

/// `θ^{(w)}` on its first `len` points, with `κ_r` inserted at position `p_r + 2`.
pub fn theta_with_insertions(
    theta: &DirectionSequence,
    kappa: &DirectionSequence,
    witnesses: &[(usize, u32)],
    len: usize,
) -> Result<DirectionSequence> {
    check_witnesses(witnesses)?;
    let points = inserted_slots(witnesses, len)
        .into_iter()
        .map(|s| resolve(s, theta, kappa).cloned())
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionSequence::new_unchecked(
        points,
        Provenance::new("theta-inserted", json!({ "witnesses": witnesses })),
    ))
}

#[derive(Clone, Debug)]
pub struct Sigma2 {
    /// Images index `interleave(θ, κ)`.
    pub permutation: Permutation,
    pub witnesses: Vec<(usize, u32)>,
    /// Length of the prefix copied from `θ^{(w)}` is `p_max + 1`.
    pub p_max: usize,
}

/// Materializes `σ_2(1..=n)` from validated witnesses.
///
/// With `w` witnesses and `p_max = p_w + 1` (zero without witnesses), positions
/// `1..=p_max+1` copy `θ^{(w)}`; beyond that, even `j - p_max` takes
/// `θ_{(j+p_max)/2 - w + 1}` and odd `j - p_max` takes `κ_{(j-p_max-1)/2 + w}`.
pub fn build_sigma2(
    theta: &DirectionSequence,
    kappa: &DirectionSequence,
    witnesses: &[(usize, u32)],
    n: usize,
) -> Result<Sigma2> {
    check_witnesses(witnesses)?;
    let w = witnesses.len();
    let p_max = witnesses.last().map_or(0, |&(p, _)| p + 1);
    let head = inserted_slots(witnesses, p_max + 1);
    let mut images = Vec::with_capacity(n);
    for j in 1..=n {
        let slot = if j <= p_max + 1 {
            head[j - 1]
        } else if (j - p_max).is_multiple_of(2) {
            Slot::Theta((j + p_max) / 2 + 1 - w)
        } else {
            Slot::Kappa((j - p_max - 1) / 2 + w)
        };
        resolve(slot, theta, kappa)?;
        images.push(match slot {
            Slot::Theta(k) => theta_slot(k),
            Slot::Kappa(k) => kappa_slot(k),
        });
    }
    let permutation = Permutation::from_images(
        "sigma2",
        images,
        json!({ "witnesses": witnesses, "p_max": p_max }),
    )?;
    Ok(Sigma2 {
        permutation,
        witnesses: witnesses.to_vec(),
        p_max,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdaptiveWitnesses {
    pub witnesses: Vec<Witness>,
    pub base: f64,
    pub p_budget: usize,
    pub q_budget: u32,
    pub precision_warning: bool,
}

impl AdaptiveWitnesses {
    pub fn pairs(&self) -> Vec<(usize, u32)> {
        self.witnesses.iter().map(|w| (w.p, w.q)).collect()
    }
}

/// Finds witnesses one at a time on `θ^{(r)}`: each next one has `p ≥ p_prev + 2`
/// and `p + q > p_prev + q_prev`, taking the smallest `p`, then the smallest `q`.
///
/// Witness `r` must reach `max(base, r)^{p+q}`, so the certified growth rate
/// increases along the witnesses.
///
/// Stops when the budgets admit no further witness; the result may be empty.
pub fn search_sigma2_witnesses(
    theta: &DirectionSequence,
    kappa: &DirectionSequence,
    base: f64,
    p_budget: usize,
    q_budget: u32,
    opts: &CriterionOptions,
) -> Result<AdaptiveWitnesses> {
    let mut found: Vec<Witness> = Vec::new();
    let mut warning = false;
    loop {
        let pairs: Vec<(usize, u32)> = found.iter().map(|w| (w.p, w.q)).collect();
        let (min_p, min_sum) = pairs.last().map_or((1, 0), |&(p, q)| (p + 2, p + q as usize));
        if min_p > p_budget {
            break;
        }
        let current = theta_with_insertions(theta, kappa, &pairs, p_budget + 1)?;
        let base_r = base.max((found.len() + 1) as f64);
        let search = find_divergence_witnesses(&current, base_r, p_budget, q_budget, opts)?;
        warning |= search.precision_warning;
        let next = search
            .witnesses
            .into_iter()
            .filter(|w| w.p >= min_p && w.p + w.q as usize > min_sum)
            .min_by_key(|w| (w.p, w.q));
        match next {
            Some(w) => found.push(w),
            None => break,
        }
    }
    Ok(AdaptiveWitnesses {
        witnesses: found,
        base,
        p_budget,
        q_budget,
        precision_warning: warning,
    })
}
