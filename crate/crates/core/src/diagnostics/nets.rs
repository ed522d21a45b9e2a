//! Annulus occupation of a `σ_c`-ordered sequence against `N / 2^r`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{min_max, BoundCheckReport, BoundRow, RangeKind};
use crate::directions::{annulus_counts, annulus_index, satisfies_halving, DirectionSequence};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NetStatOptions {
    /// Largest accepted `|c_r - N/2^r| / (N/2^r)`.
    pub tolerance: f64,
    /// Annuli expected to hold fewer points than this are not compared.
    pub min_expected: f64,
    /// Largest accepted `|r_N - log2 N|`.
    pub r_n_slack: f64,
}

impl Default for NetStatOptions {
    fn default() -> Self {
        NetStatOptions {
            tolerance: 0.25,
            min_expected: 32.0,
            r_n_slack: 2.0,
        }
    }
}

/// Per-annulus counts `c_r` of the first `N` points against `N / 2^r`, the outermost
/// occupied annulus `r_N` against `log2 N`, and the halving invariant
/// `⌈c_r/2⌉ - 1 ≤ c_{r+1} ≤ c_r/2` at every prefix up to the largest `N`.
///
/// Rows hold the largest relative deviation per `N` against the tolerance.
pub fn check_net_statistics(seq: &DirectionSequence, n_list: &[usize], opts: &NetStatOptions) -> BoundCheckReport {
    let annuli: Vec<u32> = seq.points().iter().map(annulus_index).collect();
    let n_top = n_list.iter().copied().max().unwrap_or(0).min(seq.len());
    let mut counts = vec![0usize; 2];
    let mut halving_failure = None;
    for (i, &r) in annuli[..n_top].iter().enumerate() {
        if counts.len() <= r as usize + 1 {
            counts.resize(r as usize + 2, 0);
        }
        counts[r as usize] += 1;
        if halving_failure.is_none() && !satisfies_halving(&counts) {
            halving_failure = Some(i + 1);
        }
    }
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut r_n_ok = true;
    for &n in n_list.iter().filter(|&&n| n <= seq.len()) {
        let c = annulus_counts(&annuli[..n]);
        let nf = n as f64;
        let r_n = c.len().saturating_sub(1);
        let r_n_gap = (r_n as f64 - nf.log2()).abs();
        r_n_ok &= r_n_gap <= opts.r_n_slack;
        let deviation = (1..c.len().max(2))
            .filter(|&r| nf / f64::from(1u32 << r.min(31)) >= opts.min_expected)
            .map(|r| {
                let expected = nf / f64::from(1u32 << r);
                (c.get(r).copied().unwrap_or(0) as f64 - expected).abs() / expected
            })
            .fold(0.0, f64::max);
        rows.push(BoundRow {
            index: n,
            observed: deviation,
            bound: opts.tolerance,
        });
        per_n.push(json!({ "N": n, "counts": c[1..].to_vec(), "r_N": r_n, "log2_N": nf.log2() }));
    }
    let margin = rows
        .iter()
        .map(|r| r.bound - r.observed)
        .fold(f64::INFINITY, f64::min);
    let (observed_min, observed_max) = min_max(rows.iter().map(|r| r.observed));
    BoundCheckReport {
        name: "annulus-occupation".into(),
        range_kind: RangeKind::N,
        range: (
            n_list.iter().copied().min().unwrap_or(0),
            n_top,
        ),
        observed_min,
        observed_max,
        fitted_constant: observed_max,
        pass: halving_failure.is_none() && r_n_ok && margin >= 0.0,
        margin,
        threshold: halving_failure,
        rows,
        extra: json!({ "per_N": per_n, "halving_holds": halving_failure.is_none(), "r_N_within_slack": r_n_ok }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::gen_sigma_c_sequence;
    use crate::numerics::Precision;

    #[test]
    fn first_steps() {
        let (seq, _) = gen_sigma_c_sequence(3, Precision::DEFAULT).unwrap();
        let rep = check_net_statistics(&seq, &[2, 3], &NetStatOptions::default());
        let per = &rep.extra["per_N"];
        assert_eq!(per[0]["counts"], json!([2]));
        assert_eq!(per[1]["counts"], json!([2, 1]));
        assert!(rep.pass);
    }
}
