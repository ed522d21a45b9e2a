//! The integrals `∫_0^1 t ln(t / a) dt = -1/4 - ln(a)/2` and their Riemann sums.

use serde_json::json;

use super::{BoundCheckReport, BoundRow, RangeKind};

/// `∫_0^1 t ln(t / a) dt` by composite Simpson on the dyadic pieces `[2^-k-1, 2^-k]`.
///
/// The piece `[0, 2^-60]` is dropped; it contributes less than `1e-34`.
pub fn t_log_integral(a: f64) -> f64 {
    let f = |t: f64| t * (t / a).ln();
    let panels = 1024;
    let mut total = 0.0;
    for k in (0..60).rev() {
        let hi = (-(k as f64)).exp2();
        let lo = hi / 2.0;
        let h = (hi - lo) / panels as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(lo + i as f64 * h);
        }
        total += s * h / 3.0;
    }
    total
}

/// Left Riemann sum of `t ln(t / a)` on `2^r` cells, skipping the `t = 0` endpoint.
pub fn riemann_sum(a: f64, r: u32) -> f64 {
    let n = 1u64 << r;
    let h = 1.0 / n as f64;
    (1..n)
        .map(|i| {
            let t = i as f64 * h;
            t * (t / a).ln()
        })
        .sum::<f64>()
        * h
}

/// Checks `∫ t ln t = -1/4` and `∫ t ln(t/3) = -(1/4 + ln(3)/2)` to `1e-12`, and that
/// the Riemann sums on `2^r` cells, `r = 4..=20`, approach them monotonically.
///
/// Rows hold the Riemann-sum error of the first integral per `r` against `1e-12`.
pub fn riemann_constant_check() -> BoundCheckReport {
    const TOL: f64 = 1e-12;
    let alpha = 0.25 + 3f64.ln() / 2.0;
    let i1 = t_log_integral(1.0);
    let i3 = t_log_integral(3.0);
    let err1 = (i1 + 0.25).abs();
    let err3 = (i3 + alpha).abs();
    let rows: Vec<BoundRow> = (4..=20)
        .map(|r| BoundRow {
            index: r as usize,
            observed: (riemann_sum(1.0, r) + 0.25).abs(),
            bound: TOL,
        })
        .collect();
    let rows3: Vec<f64> = (4..=20).map(|r| (riemann_sum(3.0, r) + alpha).abs()).collect();
    let monotone = rows.windows(2).all(|w| w[1].observed < w[0].observed) && rows3.windows(2).all(|w| w[1] < w[0]);
    let margin = TOL - err1.max(err3);
    BoundCheckReport {
        name: "t-log-integrals".into(),
        range_kind: RangeKind::N,
        range: (4, 20),
        observed_min: i3,
        observed_max: i1,
        fitted_constant: -i3,
        pass: margin >= 0.0 && monotone,
        margin,
        threshold: None,
        rows,
        extra: json!({
            "integral_t_ln_t": i1,
            "integral_t_ln_t_over_3": i3,
            "alpha": alpha,
            "riemann_errors_monotone": monotone,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert!((t_log_integral(1.0) + 0.25).abs() < 1e-12);
        // Split: ∫ t ln t - ln 3 ∫ t
        assert!((t_log_integral(3.0) - (t_log_integral(1.0) - 3f64.ln() / 2.0)).abs() < 1e-12);
        assert!(riemann_constant_check().pass);
    }
}
