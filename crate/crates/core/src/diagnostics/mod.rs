//! Numerical checks of the quantitative bounds behind the convergence results.

mod homography;
mod integrals;
mod nets;
mod products;

pub use homography::{criterion_under_homography, HomographyCriterion, MapReport};
pub use integrals::{riemann_constant_check, riemann_sum, t_log_integral};
pub use nets::{check_net_statistics, NetStatOptions};
pub use products::{check_annulus_products, check_product_lower_bound, log_node_products};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeKind {
    P,
    N,
}

/// One checked index: the observed quantity next to the bound it must respect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub index: usize,
    pub observed: f64,
    pub bound: f64,
}

/// Outcome of one bound check over a range of `p` or `N`.
///
/// `pass` holds exactly when `margin ≥ 0`, `margin` being the smallest
/// `observed - bound` over the rows the bound applies to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub name: String,
    pub range_kind: RangeKind,
    pub range: (usize, usize),
    pub observed_min: f64,
    pub observed_max: f64,
    pub fitted_constant: f64,
    pub pass: bool,
    pub margin: f64,
    /// First index from which the bound holds throughout, where that matters.
    pub threshold: Option<usize>,
    pub rows: Vec<BoundRow>,
    #[serde(default)]
    pub extra: serde_json::Value,
}

impl BoundCheckReport {
    /// Fixed-width text rendering, rows in index order.
    pub fn table(&self) -> String {
        let label = match self.range_kind {
            RangeKind::P => "p",
            RangeKind::N => "N",
        };
        let mut s = format!("{}\n{label:>6} {:>16} {:>16}\n", self.name, "observed", "bound");
        for r in &self.rows {
            s.push_str(&format!("{:>6} {:>16.6e} {:>16.6e}\n", r.index, r.observed, r.bound));
        }
        s.push_str(&format!(
            "range {}..={}  observed [{:.6e}, {:.6e}]  fitted {:.6e}  margin {:.6e}  threshold {}  pass {}\n",
            self.range.0,
            self.range.1,
            self.observed_min,
            self.observed_max,
            self.fitted_constant,
            self.margin,
            self.threshold.map_or_else(|| "-".to_string(), |t| t.to_string()),
            self.pass
        ));
        s
    }
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
