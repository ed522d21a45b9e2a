//! Discrete derivatives `Δ_p[h](η_{p+1})` on the nodes `η_1, …, η_{p+1}`.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{Precision, PrecisionComplex};

/// Smallest admissible node gap at `bits` of precision: `2^-(bits/2)`.
pub fn duplicate_threshold(bits: u32) -> f64 {
    (-f64::from(bits / 2)).exp2()
}

pub(crate) fn working_precision(nodes: &[PrecisionComplex]) -> Precision {
    let bits = nodes.iter().map(PrecisionComplex::prec).max().unwrap_or(0);
    Precision::new(bits).unwrap_or_default()
}

fn check_len(nodes: &[PrecisionComplex], p: usize) -> Result<()> {
    if nodes.len() < p + 1 {
        return Err(Error::InsufficientNodes {
            needed: p + 1,
            available: nodes.len(),
        });
    }
    Ok(())
}

/// Fails with `DuplicateNode` when `|a - b|` is below the threshold for `bits`.
pub(crate) fn checked_difference(
    nodes: &[PrecisionComplex],
    first: usize,
    second: usize,
    bits: u32,
) -> Result<PrecisionComplex> {
    let d = &nodes[first] - &nodes[second];
    let threshold = duplicate_threshold(bits);
    let gap = d.abs();
    if gap < threshold {
        return Err(Error::DuplicateNode {
            first: first + 1,
            second: second + 1,
            gap: gap.to_f64(),
            threshold,
        });
    }
    Ok(d)
}

/// `Δ_p[h](η_{p+1})` by the defining recursion
/// `Δ_k(w) = (Δ_{k-1}(w) - Δ_{k-1}(η_k)) / (w - η_k)`.
///
/// `nodes[0]` is `η_1`. Runs in `O(p^2)` divisions.
pub fn delta_recursive<H>(h: H, nodes: &[PrecisionComplex], p: usize) -> Result<PrecisionComplex>
where
    H: Fn(&PrecisionComplex) -> PrecisionComplex,
{
    check_len(nodes, p)?;
    let bits = working_precision(&nodes[..=p]).bits();
    // row[i] holds Δ_k(η_{i+1}) for i ≥ k after pass k.
    let mut row: Vec<PrecisionComplex> = nodes[..=p].iter().map(&h).collect();
    for k in 1..=p {
        let pivot = row[k - 1].clone();
        for i in k..=p {
            let d = checked_difference(nodes, i, k - 1, bits)?;
            row[i] = &(&row[i] - &pivot) / &d;
        }
    }
    Ok(row.swap_remove(p))
}

/// `Δ_p[h](η_{p+1}) = Σ_q h(η_q) / Π_{j≠q} (η_q - η_j)` over `q = 1..=p+1`.
pub fn delta_closed_form<H>(h: H, nodes: &[PrecisionComplex], p: usize) -> Result<PrecisionComplex>
where
    H: Fn(&PrecisionComplex) -> PrecisionComplex,
{
    check_len(nodes, p)?;
    let nodes = &nodes[..=p];
    let weights = closed_form_weights(nodes)?;
    let prec = working_precision(nodes);
    let mut acc = PrecisionComplex::zero(prec);
    for (node, w) in nodes.iter().zip(&weights) {
        acc += &h(node) * w;
    }
    Ok(acc)
}

/// `1 / Π_{j≠q} (η_q - η_j)` for every node.
pub fn closed_form_weights(nodes: &[PrecisionComplex]) -> Result<Vec<PrecisionComplex>> {
    let prec = working_precision(nodes);
    let bits = prec.bits();
    let mut out = Vec::with_capacity(nodes.len());
    for q in 0..nodes.len() {
        let mut prod = PrecisionComplex::one(prec);
        for j in (0..nodes.len()).filter(|&j| j != q) {
            prod *= checked_difference(nodes, q, j, bits)?;
        }
        out.push(prod.recip());
    }
    Ok(out)
}

/// Closed-form weights for every prefix length, built incrementally.
///
/// After `advance` has consumed nodes `0..=p`, `weights()[q]` equals
/// `1 / Π_{j≤p, j≠q} (η_q - η_j)`.
pub(crate) struct PrefixWeights<'a> {
    nodes: &'a [PrecisionComplex],
    prec: Precision,
    denominators: Vec<PrecisionComplex>,
    weights: Vec<PrecisionComplex>,
}

impl<'a> PrefixWeights<'a> {
    pub(crate) fn new(nodes: &'a [PrecisionComplex], prec: Precision) -> Self {
        PrefixWeights {
            nodes,
            prec,
            denominators: Vec::new(),
            weights: Vec::new(),
        }
    }

    /// Adds node `p = self.len()` to the prefix.
    pub(crate) fn advance(&mut self) -> Result<()> {
        let p = self.denominators.len();
        let bits = self.prec.bits();
        let mut fresh = PrecisionComplex::one(self.prec);
        for q in 0..p {
            let d = checked_difference(self.nodes, q, p, bits)?;
            fresh *= -&d;
            self.denominators[q] *= &d;
        }
        self.denominators.push(fresh);
        self.weights = self.denominators.iter().map(PrecisionComplex::recip).collect();
        Ok(())
    }

    pub(crate) fn weights(&self) -> &[PrecisionComplex] {
        &self.weights
    }
}

/// Relative discrepancy `|lo - hi| / |hi|`, zero when both vanish.
pub(crate) fn relative_discrepancy(lo: &PrecisionComplex, hi: &PrecisionComplex) -> f64 {
    let diff = (lo - hi).abs();
    if diff.is_zero() {
        return 0.0;
    }
    let scale = hi.abs();
    if scale.is_zero() {
        return f64::INFINITY;
    }
    Float::with_val(diff.prec(), &diff / &scale).to_f64()
}
