//! Lower bounds for node products `Π_{j≠q} |η_q - η_j|`.

use serde_json::json;

use super::{min_max, BoundCheckReport, BoundRow, RangeKind};
use crate::directions::{annulus_index, DirectionSequence};

/// `ln Π_{j<n, j≠q} |η_q - η_j|` for each `q < n` (0-based), summed in `f64` logs.
pub fn log_node_products(seq: &DirectionSequence, n: usize) -> Vec<f64> {
    let xy: Vec<(f64, f64)> = seq.points()[..n].iter().map(|z| z.to_f64_pair()).collect();
    (0..n)
        .map(|q| {
            (0..n)
                .filter(|&j| j != q)
                .map(|j| (xy[q].0 - xy[j].0).hypot(xy[q].1 - xy[j].1).ln())
                .sum()
        })
        .collect()
}

/// `min_q Π_{j≤p+1, j≠q} |η_q - η_j| ≥ exp(-16 p)` on the square-net sequence.
///
/// Rows hold `ln min_q Π` against `-16 p`. The threshold `p_η` is the smallest `p`
/// from which the bound holds through `p_max`; the fitted constant is the smallest
/// `c` with `ln min_q Π ≥ -c p` on that range.
pub fn check_product_lower_bound(seq: &DirectionSequence, p_max: usize) -> BoundCheckReport {
    let p_max = p_max.min(seq.len().saturating_sub(1));
    let rows: Vec<BoundRow> = (0..=p_max)
        .map(|p| BoundRow {
            index: p,
            observed: log_node_products(seq, p + 1).into_iter().fold(f64::INFINITY, f64::min),
            bound: -16.0 * p as f64,
        })
        .collect();
    let threshold = (0..=p_max)
        .rev()
        .take_while(|&p| rows[p].observed >= rows[p].bound)
        .last();
    let applies = threshold.map_or(&rows[..0], |t| &rows[t..]);
    let margin = applies
        .iter()
        .map(|r| r.observed - r.bound)
        .fold(f64::INFINITY, f64::min);
    let fitted = applies
        .iter()
        .filter(|r| r.index > 0)
        .map(|r| -r.observed / r.index as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let (observed_min, observed_max) = min_max(rows.iter().map(|r| r.observed));
    BoundCheckReport {
        name: "node-product-lower-bound".into(),
        range_kind: RangeKind::P,
        range: (0, p_max),
        observed_min,
        observed_max,
        fitted_constant: fitted,
        pass: threshold.is_some() && margin >= 0.0,
        margin: if threshold.is_some() { margin } else { f64::NEG_INFINITY },
        threshold,
        rows,
        extra: json!({ "observed": "ln min_q product", "bound": "-16 p" }),
    }
}

/// Fits `Π_{j≤N, j≠p} |η_p - η_j| ≥ (3B)^{-N}` for every `p ≤ N`, and
/// `≥ r^N / (B D)^N` for `η_p ∈ C_r`, `r ≥ 3`, on a `σ_c`-ordered sequence.
///
/// Rows hold, per `N`, `ln(3 B̂_N)` against the cumulative fit over the whole list.
/// Passes when refitting on the first half of the list changes `B̂` and `D̂` by
/// less than 10%.
pub fn check_annulus_products(seq: &DirectionSequence, n_list: &[usize]) -> BoundCheckReport {
    let annuli: Vec<u32> = seq.points().iter().map(annulus_index).collect();
    let mut per_n = Vec::new();
    for &n in n_list.iter().filter(|&&n| n >= 2 && n <= seq.len()) {
        let logs = log_node_products(seq, n);
        let nf = n as f64;
        // ln(3B) ≥ -ln Π / N
        let b_log = logs.iter().map(|l| -l / nf).fold(f64::NEG_INFINITY, f64::max);
        // ln(B D) ≥ ln r - ln Π / N for the outer annuli
        let bd_log = logs
            .iter()
            .zip(&annuli)
            .filter(|(_, &r)| r >= 3)
            .map(|(l, &r)| f64::from(r).ln() - l / nf)
            .fold(f64::NEG_INFINITY, f64::max);
        per_n.push((n, b_log, bd_log));
    }
    let fit = |rows: &[(usize, f64, f64)]| -> (f64, f64) {
        let b_log = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let bd_log = rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
        let b = b_log.exp() / 3.0;
        let d = if bd_log.is_finite() { bd_log.exp() / b } else { 0.0 };
        (b, d)
    };
    let (b_full, d_full) = fit(&per_n);
    let (b_half, d_half) = fit(&per_n[..per_n.len().div_ceil(2)]);
    let rel = |a: f64, b: f64| if a == 0.0 && b == 0.0 { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
    let change = rel(b_full, b_half).max(rel(d_full, d_half));
    let bound = (3.0 * b_full).ln();
    let rows: Vec<BoundRow> = per_n
        .iter()
        .map(|&(n, b_log, _)| BoundRow {
            index: n,
            observed: b_log,
            bound,
        })
        .collect();
    let (observed_min, observed_max) = min_max(rows.iter().map(|r| r.observed));
    let margin = 0.1 - change;
    BoundCheckReport {
        name: "annulus-product-lower-bound".into(),
        range_kind: RangeKind::N,
        range: (
            per_n.first().map_or(0, |r| r.0),
            per_n.last().map_or(0, |r| r.0),
        ),
        observed_min,
        observed_max,
        fitted_constant: b_full,
        pass: !per_n.is_empty() && margin >= 0.0,
        margin,
        threshold: None,
        rows,
        extra: json!({
            "B_hat": b_full,
            "D_hat": d_full,
            "B_hat_first_half": b_half,
            "D_hat_first_half": d_half,
            "relative_change": change,
            "observed": "max_p -ln(product)/N, i.e. ln(3 B_N)",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::gen_square_net_sequence;
    use crate::numerics::Precision;

    #[test]
    fn first_square_net_products() {
        let seq = gen_square_net_sequence(9, Precision::DEFAULT);
        let logs = log_node_products(&seq, 2);
        assert!(logs.iter().all(|l| l.abs() < 1e-15));
        let rep = check_product_lower_bound(&seq, 8);
        assert!(rep.rows[8].observed >= -128.0);
        // brute-force minimum over q for p = 8 (all nine points of the level-one net)
        let pts: Vec<(f64, f64)> = seq.points().iter().map(|z| z.to_f64_pair()).collect();
        let brute = (0..9)
            .map(|q| (0..9).filter(|&j| j != q).map(|j| (pts[q].0 - pts[j].0).hypot(pts[q].1 - pts[j].1)).product::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((rep.rows[8].observed - brute.ln()).abs() < 1e-12);
    }
}
