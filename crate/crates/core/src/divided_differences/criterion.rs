//! The growth criterion `|Δ_p[φ^q](η_{p+1})| ≤ R^{p+q}` evaluated on a finite prefix,
//! with `φ(ζ) = conj(ζ) / (1 + |ζ|^2)`.

use rug::Float;
use serde::{Deserialize, Serialize};

use super::delta::{relative_discrepancy, PrefixWeights};
use crate::directions::DirectionSequence;
use crate::error::{Error, Result};
use crate::numerics::{parse_real, phi_kernel, real_to_decimal, Precision, PrecisionComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "BOUNDED",
            Verdict::Growing => "GROWING",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CriterionOptions {
    /// Low precision of the dual pair; the high one is twice this.
    pub precision: Precision,
    /// Escalation stops once the high precision would exceed this.
    pub max_bits: u32,
    /// Largest accepted relative disagreement between the two precisions.
    pub tolerance: f64,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        CriterionOptions {
            precision: Precision::DEFAULT,
            max_bits: 2048,
            tolerance: (-64f64).exp2(),
        }
    }
}

/// Smallest `p + q` used when fitting the growth base.
pub const FIT_MIN_ORDER: usize = 4;
/// Smallest rate exponent classified `GROWING`.
pub const RATE_EXPONENT_GROWING: f64 = 0.6;
/// Largest rate exponent classified `BOUNDED`.
pub const RATE_EXPONENT_BOUNDED: f64 = 0.4;

/// Matrix `M[p][q] = |Δ_p[φ^q](η_{p+1})|` with its growth fit.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub p_max: usize,
    pub q_max: u32,
    /// `entries[p][q]`, at the high precision of the accepted pair.
    pub entries: Vec<Vec<Float>>,
    /// `ln entries[p][q]`, `-inf` for zero entries.
    pub log_entries: Vec<Vec<f64>>,
    /// Growth base fitted on all rows.
    pub r_hat: f64,
    /// Growth base fitted on the rows `p ≤ P - ⌈P/4⌉`.
    pub r_hat_early: f64,
    /// Least-squares slope of `ln max_q M[p][q]` over the top half of `p`.
    pub growth_slope: f64,
    /// Exponent `α` of `R̂(p) ∝ p^α` over the top half of `p`, where `R̂(p)` is the
    /// base fitted on rows `≤ p`. Near zero when `R̂` levels off, near `c` for `(p!)^c` growth.
    pub rate_exponent: f64,
    pub verdict: Verdict,
    /// Low precision of the accepted dual pair.
    pub precision_bits: u32,
    pub dual_precision_max_discrepancy: f64,
}

impl CriterionReport {
    pub fn entry_f64(&self, p: usize, q: u32) -> f64 {
        self.entries[p][q as usize].to_f64()
    }

    /// Entries with `M[p][q] ≥ base^{p+q}` and `q ≥ 1`.
    pub fn exceedances(&self, base: f64) -> Vec<(usize, u32, f64)> {
        let lb = base.ln();
        let mut out = Vec::new();
        for (p, row) in self.log_entries.iter().enumerate() {
            for (q, &lm) in row.iter().enumerate().skip(1) {
                if lm.is_finite() && lm >= lb * (p + q) as f64 {
                    out.push((p, q as u32, lm.exp()));
                }
            }
        }
        out
    }

    /// Fixed-width text table of `log10 M[p][q]`.
    pub fn table(&self) -> String {
        let mut s = format!("{:>4}", "p\\q");
        for q in 0..=self.q_max {
            s.push_str(&format!(" {q:>9}"));
        }
        s.push('\n');
        for (p, row) in self.log_entries.iter().enumerate() {
            s.push_str(&format!("{p:>4}"));
            for lm in row {
                if lm.is_finite() {
                    s.push_str(&format!(" {:>9.3}", lm / std::f64::consts::LN_10));
                } else {
                    s.push_str(&format!(" {:>9}", "-inf"));
                }
            }
            s.push('\n');
        }
        s.push_str(&format!(
            "R_hat = {:.6}  R_hat(early) = {:.6}  slope = {:.4}  rate exponent = {:.4}  verdict = {}  precision = {} bits  max discrepancy = {:.3e}\n",
            self.r_hat, self.r_hat_early, self.growth_slope, self.rate_exponent, self.verdict, self.precision_bits, self.dual_precision_max_discrepancy
        ));
        s
    }
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    #[serde(rename = "P")]
    p_max: usize,
    #[serde(rename = "Q")]
    q_max: u32,
    entries: Vec<Vec<String>>,
    #[serde(rename = "R_hat")]
    r_hat: f64,
    #[serde(rename = "R_hat_early")]
    r_hat_early: f64,
    growth_slope: f64,
    rate_exponent: f64,
    verdict: Verdict,
    precision_bits: u32,
    dual_precision_max_discrepancy: f64,
}

impl Serialize for CriterionReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            p_max: self.p_max,
            q_max: self.q_max,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(real_to_decimal).collect())
                .collect(),
            r_hat: self.r_hat,
            r_hat_early: self.r_hat_early,
            growth_slope: self.growth_slope,
            rate_exponent: self.rate_exponent,
            verdict: self.verdict,
            precision_bits: self.precision_bits,
            dual_precision_max_discrepancy: self.dual_precision_max_discrepancy,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CriterionReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ReportJson::deserialize(deserializer)?;
        let prec = Precision::new(raw.precision_bits.saturating_mul(2)).map_err(serde::de::Error::custom)?;
        let entries = raw
            .entries
            .iter()
            .map(|row| row.iter().map(|s| parse_real(s, prec)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let log_entries = log_matrix(&entries);
        Ok(CriterionReport {
            p_max: raw.p_max,
            q_max: raw.q_max,
            entries,
            log_entries,
            r_hat: raw.r_hat,
            r_hat_early: raw.r_hat_early,
            growth_slope: raw.growth_slope,
            rate_exponent: raw.rate_exponent,
            verdict: raw.verdict,
            precision_bits: raw.precision_bits,
            dual_precision_max_discrepancy: raw.dual_precision_max_discrepancy,
        })
    }
}

/// Complex values `Δ_p[φ^q](η_{p+1})` for `p ≤ p_max`, `q ≤ q_max`, at `prec`.
///
/// Column `q = 0` is exact: one at `p = 0`, zero elsewhere.
pub fn criterion_values(
    points: &[PrecisionComplex],
    p_max: usize,
    q_max: u32,
    prec: Precision,
) -> Result<Vec<Vec<PrecisionComplex>>> {
    if points.len() < p_max + 1 {
        return Err(Error::InsufficientNodes {
            needed: p_max + 1,
            available: points.len(),
        });
    }
    let nodes: Vec<_> = points[..=p_max].iter().map(|z| z.with_prec(prec)).collect();
    let base: Vec<_> = nodes.iter().map(|z| phi_kernel(z, 1)).collect();
    // powers[j][q] = φ(η_j)^q
    let powers: Vec<Vec<PrecisionComplex>> = base
        .iter()
        .map(|b| {
            let mut row = Vec::with_capacity(q_max as usize + 1);
            row.push(PrecisionComplex::one(prec));
            for q in 1..=q_max as usize {
                let next = &row[q - 1] * b;
                row.push(next);
            }
            row
        })
        .collect();
    let mut weights = PrefixWeights::new(&nodes, prec);
    let mut out = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        weights.advance()?;
        let w = weights.weights();
        let mut row = Vec::with_capacity(q_max as usize + 1);
        row.push(if p == 0 {
            PrecisionComplex::one(prec)
        } else {
            PrecisionComplex::zero(prec)
        });
        for q in 1..=q_max as usize {
            let mut acc = PrecisionComplex::zero(prec);
            for j in 0..=p {
                acc += &powers[j][q] * &w[j];
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// Values at the accepted dual pair, with the pair's low precision and discrepancy.
pub struct DualValues {
    pub high: Vec<Vec<PrecisionComplex>>,
    pub precision_bits: u32,
    pub max_discrepancy: f64,
    /// Whether the tolerance was met below `max_bits`.
    pub converged: bool,
}

/// Computes the matrix at `(b, 2b)` bits, doubling `b` while the two disagree.
pub fn criterion_values_dual(
    points: &[PrecisionComplex],
    p_max: usize,
    q_max: u32,
    opts: &CriterionOptions,
) -> Result<DualValues> {
    let mut bits = opts.precision;
    let mut low = criterion_values(points, p_max, q_max, bits)?;
    loop {
        let high = criterion_values(points, p_max, q_max, bits.doubled())?;
        let disc = low
            .iter()
            .zip(&high)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| relative_discrepancy(x, y)))
            .fold(0.0, f64::max);
        let converged = disc <= opts.tolerance;
        if converged || bits.doubled().doubled().bits() > opts.max_bits {
            return Ok(DualValues {
                high,
                precision_bits: bits.bits(),
                max_discrepancy: disc,
                converged,
            });
        }
        bits = bits.doubled();
        low = high;
    }
}

/// Full criterion report on the first `p_max + 1` points.
pub fn criterion_matrix_points(
    points: &[PrecisionComplex],
    p_max: usize,
    q_max: u32,
    opts: &CriterionOptions,
) -> Result<CriterionReport> {
    let dual = criterion_values_dual(points, p_max, q_max, opts)?;
    if !dual.converged {
        return Err(Error::PrecisionFailure {
            discrepancy: dual.max_discrepancy,
            bits: dual.precision_bits * 2,
        });
    }
    let entries: Vec<Vec<Float>> = dual
        .high
        .iter()
        .map(|row| row.iter().map(PrecisionComplex::abs).collect())
        .collect();
    let log_entries = log_matrix(&entries);
    let fit = GrowthFit::new(&log_entries);
    Ok(CriterionReport {
        p_max,
        q_max,
        entries,
        log_entries,
        r_hat: fit.r_hat,
        r_hat_early: fit.r_hat_early,
        growth_slope: fit.slope,
        rate_exponent: fit.rate_exponent,
        verdict: fit.verdict(),
        precision_bits: dual.precision_bits,
        dual_precision_max_discrepancy: dual.max_discrepancy,
    })
}

/// Criterion report for a direction sequence.
pub fn criterion_matrix(
    seq: &DirectionSequence,
    p_max: usize,
    q_max: u32,
    opts: &CriterionOptions,
) -> Result<CriterionReport> {
    criterion_matrix_points(seq.points(), p_max, q_max, opts)
}

fn log_matrix(entries: &[Vec<Float>]) -> Vec<Vec<f64>> {
    entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    if m.is_zero() {
                        f64::NEG_INFINITY
                    } else {
                        Float::with_val(m.prec(), m.ln_ref()).to_f64()
                    }
                })
                .collect()
        })
        .collect()
}

/// Growth statistics of a log-magnitude matrix `L[p][q]`.
#[derive(Clone, Copy, Debug)]
pub struct GrowthFit {
    pub r_hat: f64,
    pub r_hat_early: f64,
    pub slope: f64,
    pub rate_exponent: f64,
}

impl GrowthFit {
    pub fn new(log_entries: &[Vec<f64>]) -> Self {
        let p_max = log_entries.len().saturating_sub(1);
        let early = p_max - p_max.div_ceil(4);
        GrowthFit {
            r_hat: fit_growth_base(log_entries, p_max),
            r_hat_early: fit_growth_base(log_entries, early),
            slope: top_half_slope(log_entries),
            rate_exponent: rate_exponent(log_entries),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.rate_exponent >= RATE_EXPONENT_GROWING {
            Verdict::Growing
        } else if self.rate_exponent <= RATE_EXPONENT_BOUNDED {
            Verdict::Bounded
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Least-squares slope of `ln R̂(p)` against `ln p` over `p ≥ ⌈P/2⌉`.
pub fn rate_exponent(log_entries: &[Vec<f64>]) -> f64 {
    let p_max = log_entries.len().saturating_sub(1);
    let mut envelope = f64::NEG_INFINITY;
    let mut pts = Vec::new();
    for (p, row) in log_entries.iter().enumerate() {
        for (q, &lm) in row.iter().enumerate() {
            if p + q >= FIT_MIN_ORDER && lm.is_finite() {
                envelope = envelope.max(lm / (p + q) as f64);
            }
        }
        if p >= p_max.div_ceil(2) && p >= 1 && envelope.is_finite() {
            pts.push(((p as f64).ln(), envelope));
        }
    }
    least_squares_slope(&pts)
}

/// `max M[p][q]^{1/(p+q)}` over `p ≤ p_limit`, `p + q ≥ 4`; zero when no entry qualifies.
pub fn fit_growth_base(log_entries: &[Vec<f64>], p_limit: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (p, row) in log_entries.iter().enumerate().take(p_limit + 1) {
        for (q, &lm) in row.iter().enumerate() {
            if p + q >= FIT_MIN_ORDER && lm.is_finite() {
                best = best.max(lm / (p + q) as f64);
            }
        }
    }
    best.exp()
}

/// Least-squares slope of `ln max_q M[p][q]` against `p` for `p ≥ ⌈P/2⌉`.
pub fn top_half_slope(log_entries: &[Vec<f64>]) -> f64 {
    let p_max = log_entries.len().saturating_sub(1);
    let pts: Vec<(f64, f64)> = (p_max.div_ceil(2)..=p_max)
        .filter_map(|p| {
            let y = log_entries[p].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            y.is_finite().then_some((p as f64, y))
        })
        .collect();
    least_squares_slope(&pts)
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> PrecisionComplex {
        PrecisionComplex::from_f64(re, im, Precision::DEFAULT)
    }

    #[test]
    fn zero_column_is_exact() {
        let pts: Vec<_> = (1..=6).map(|j| c(f64::from(j).sin(), 0.5 * f64::from(j))).collect();
        let r = criterion_matrix_points(&pts, 5, 2, &CriterionOptions::default()).unwrap();
        assert_eq!(r.entry_f64(0, 0), 1.0);
        for p in 1..=5 {
            assert_eq!(r.entry_f64(p, 0), 0.0);
        }
    }

    #[test]
    fn matches_single_delta() {
        let pts: Vec<_> = (1..=8).map(|j| c(f64::from(j).cos(), f64::from(j).sin() * 2.0)).collect();
        let r = criterion_matrix_points(&pts, 7, 3, &CriterionOptions::default()).unwrap();
        for p in 0..=7 {
            for q in 1..=3 {
                let d = super::super::delta_recursive(|z| phi_kernel(z, q), &pts, p).unwrap();
                let rel = (d.abs_f64() - r.entry_f64(p, q)).abs() / r.entry_f64(p, q);
                assert!(rel < 1e-30, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn slope_and_base_fit() {
        // Exactly geometric: L[p][q] = (p+q) ln 3.
        let geo: Vec<Vec<f64>> = (0..=20)
            .map(|p| (0..=4).map(|q| ((p + q) as f64) * 3f64.ln()).collect())
            .collect();
        let fit = GrowthFit::new(&geo);
        assert!((fit.r_hat - 3.0).abs() < 1e-12);
        assert_eq!(fit.verdict(), Verdict::Bounded);
        // Factorial growth outruns any geometric fit.
        let fact: Vec<Vec<f64>> = (0..=20)
            .map(|p| (0..=4).map(|q| (1..=2 * p).map(|k| (k as f64).ln()).sum::<f64>() + q as f64).collect())
            .collect();
        assert_eq!(GrowthFit::new(&fact).verdict(), Verdict::Growing);
    }

    #[test]
    fn json_round_trip() {
        let pts: Vec<_> = (1..=5).map(|j| c(0.1 * f64::from(j), -0.2 * f64::from(j * j))).collect();
        let r = criterion_matrix_points(&pts, 4, 2, &CriterionOptions::default()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: CriterionReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.verdict, r.verdict);
        assert_eq!(back.entries, r.entries);
    }
}
