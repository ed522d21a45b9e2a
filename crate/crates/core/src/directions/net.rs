//! Nested nets: level `k` has spacing about `2^-k` and contains every lower level.

use serde::{Deserialize, Serialize};

use super::sequence::min_pairwise_distance;
use crate::numerics::PrecisionComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    /// `[0,1] + i[0,1]`
    UnitSquare,
    /// `{r-1 < ‖ζ‖_∞ ≤ r}`, or the closed unit square for `r = 1`.
    Annulus { r: u32 },
}

/// Points first admitted at level `k` (1-based indices into the source sequence).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetLevel {
    pub k: u32,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetPlan {
    pub levels: Vec<NetLevel>,
    pub region: Region,
}

impl NetPlan {
    /// Members of every level up to and including `k`.
    pub fn members_through(&self, k: u32) -> Vec<usize> {
        self.levels
            .iter()
            .filter(|l| l.k <= k)
            .flat_map(|l| l.members.iter().copied())
            .collect()
    }

    /// Levels are strictly increasing and no index appears twice, so each level's
    /// cumulative set contains the previous one.
    pub fn is_nested(&self) -> bool {
        let increasing = self.levels.windows(2).all(|w| w[0].k < w[1].k);
        let mut all: Vec<usize> = self.levels.iter().flat_map(|l| l.members.iter().copied()).collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        increasing && all.len() == total
    }

    /// Smallest `d_k · 2^k` over the built levels, where `d_k` is the minimum
    /// distance among members through level `k`; `points[j-1]` is member `j`.
    pub fn spacing_ratio(&self, points: &[PrecisionComplex]) -> f64 {
        let mut worst = f64::INFINITY;
        for level in &self.levels {
            let xy: Vec<(f64, f64)> = self
                .members_through(level.k)
                .into_iter()
                .map(|j| points[j - 1].to_f64_pair())
                .collect();
            let d = min_pairwise_distance(&xy);
            worst = worst.min(d * f64::from(level.k).exp2());
        }
        worst
    }
}
