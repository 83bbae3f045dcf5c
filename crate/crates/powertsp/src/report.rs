//! Serializable run reports: what was solved, the tour, its cost against the
//! spanning-tree lower bound and the exact optimum when available, and a
//! per-edge contribution summary.

use serde::{Deserialize, Serialize};

use crate::analysis::EdgeContribution;
use crate::geometry::PointSet;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Contribution-ratio histogram bin width.
pub const CONTRIB_BIN_WIDTH: f64 = 0.5;
/// Number of histogram bins; the last bin collects everything above.
pub const CONTRIB_BINS: usize = 13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub source: String,
    pub n: usize,
    pub dim: usize,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Tour payload of a report. For tree-based constructions `order` is a
/// permutation and `legs[i]` lists the tree edge ids the i-th tour edge
/// uses; for revisit-allowed walks `order` is the full walk and `revisited`
/// flags the vertices seen more than once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourRecord {
    pub order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legs: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub revisited: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContributionSummary {
    pub max_ratio: f64,
    pub bin_width: f64,
    /// `counts[i]` covers ratios in `[i*bin_width, (i+1)*bin_width)`; the
    /// last bin is open-ended.
    pub counts: Vec<u64>,
}

pub fn contribution_summary(contribs: &[EdgeContribution]) -> ContributionSummary {
    let mut counts = vec![0u64; CONTRIB_BINS];
    let mut max_ratio = 0.0f64;
    for c in contribs {
        max_ratio = max_ratio.max(c.ratio);
        let bin = ((c.ratio / CONTRIB_BIN_WIDTH) as usize).min(CONTRIB_BINS - 1);
        counts[bin] += 1;
    }
    ContributionSummary {
        max_ratio,
        bin_width: CONTRIB_BIN_WIDTH,
        counts,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub instance: InstanceDescriptor,
    pub algorithm: String,
    pub tour: TourRecord,
    pub total_cost: f64,
    pub mst_lower_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_opt: Option<f64>,
    pub ratio_vs_mst: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_vs_opt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributions: Option<ContributionSummary>,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> crate::Result<RunReport> {
        Ok(serde_json::from_str(text)?)
    }

    /// Recomputes the tour cost from the recorded order (a cyclic walk) and
    /// the instance points.
    pub fn rescore(&self, points: &PointSet) -> f64 {
        let order = &self.tour.order;
        if order.len() < 2 {
            return 0.0;
        }
        (0..order.len())
            .map(|i| points.cost(order[i], order[(i + 1) % order.len()]))
            .sum()
    }

    /// One-line summary for command-line output.
    pub fn summary_line(&self) -> String {
        let opt = match self.ratio_vs_opt {
            Some(r) => format!(" cost/opt={r:.4}"),
            None => String::new(),
        };
        format!(
            "{} n={} d={} alpha={} cost={:.6} mst={:.6} cost/mst={:.4}{}",
            self.algorithm,
            self.instance.n,
            self.instance.dim,
            self.instance.alpha,
            self.total_cost,
            self.mst_lower_bound,
            self.ratio_vs_mst,
            opt
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Alpha;
    use crate::instances::gen_random;
    use crate::tour::{solve_t3, SelectionPolicy};

    #[test]
    fn report_json_round_trip() {
        let ps = gen_random(12, 2, Alpha::TWO, 9);
        let report = solve_t3(&ps, SelectionPolicy::Geometric).unwrap();
        let json = report.to_json();
        let back = RunReport::from_json(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn rescore_matches_reported_cost() {
        let ps = gen_random(20, 2, Alpha::TWO, 10);
        let report = solve_t3(&ps, SelectionPolicy::Arbitrary).unwrap();
        let rescored = report.rescore(&ps);
        assert!((rescored - report.total_cost).abs() <= 1e-9 * report.total_cost.max(1.0));
    }

    #[test]
    fn histogram_bins_cover_ratios() {
        let contribs = vec![
            EdgeContribution { edge: 0, contrib: 1.0, ratio: 0.4 },
            EdgeContribution { edge: 1, contrib: 1.0, ratio: 4.9 },
            EdgeContribution { edge: 2, contrib: 1.0, ratio: 99.0 },
        ];
        let summary = contribution_summary(&contribs);
        assert_eq!(summary.counts[0], 1);
        assert_eq!(summary.counts[9], 1);
        assert_eq!(summary.counts[CONTRIB_BINS - 1], 1);
        assert_eq!(summary.max_ratio, 99.0);
    }
}
