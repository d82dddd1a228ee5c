use std::collections::BTreeMap;

use serde::Serialize;

use super::trial::TrialRecord;

/// Mean, sample standard deviation and a 95% normal confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let sd = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0)).sqrt()
        } else {
            0.0
        };
        let half = 1.96 * sd / m.sqrt();
        Some(Self { count: xs.len(), mean, sd, ci_low: mean - half, ci_high: mean + half })
    }

    /// Coefficient of variation `sd / |mean|`.
    pub fn cv(&self) -> f64 {
        if self.sd == 0.0 {
            0.0
        } else {
            self.sd / self.mean.abs()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub gamma: f64,
    pub c0: f64,
    pub regime: String,
    pub replicates: usize,
    pub feasible: usize,
    #[serde(rename = "predicted_W")]
    pub predicted_w: Option<f64>,
    #[serde(rename = "repaired_W")]
    pub repaired_w: Option<Stats>,
    pub phi_star: Option<Stats>,
    pub lambda_star: Option<Stats>,
    /// `mean(repaired_W) / predicted_W`.
    #[serde(rename = "ratio_W")]
    pub ratio_w: Option<f64>,
    /// `mean(phi_star) / predicted_W`.
    pub ratio_phi: Option<f64>,
    pub cv_phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SummaryTable {
    pub cells: Vec<CellSummary>,
}

/// Aggregates records by `(n, gamma, c0)`, sorted by those keys. Rows without a dual solution are counted but left out of
/// the statistics.
pub fn summarize(records: &[TrialRecord]) -> SummaryTable {
    let mut groups: BTreeMap<(usize, u64, u64), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.gamma.to_bits(), r.c0.to_bits())).or_default().push(r);
    }
    let cells = groups
        .into_values()
        .map(|rows| {
            let first = rows[0];
            let solved: Vec<&&TrialRecord> = rows.iter().filter(|r| !r.lambda_star.is_nan()).collect();
            let w: Vec<f64> = solved.iter().map(|r| r.repaired_w).collect();
            let p: Vec<f64> = solved.iter().map(|r| r.phi_star).collect();
            let l: Vec<f64> = solved.iter().map(|r| r.lambda_star).collect();
            let repaired_w = Stats::of(&w);
            let phi_star = Stats::of(&p);
            let predicted_w = first.predicted_w.filter(|_| first.regime != "out_of_range");
            let ratio = |s: Option<Stats>| match (s, predicted_w) {
                (Some(s), Some(pw)) if pw != 0.0 => Some(s.mean / pw),
                _ => None,
            };
            CellSummary {
                n: first.n,
                gamma: first.gamma,
                c0: first.c0,
                regime: first.regime.clone(),
                replicates: rows.len(),
                feasible: rows.iter().filter(|r| r.feasible).count(),
                predicted_w,
                ratio_w: ratio(repaired_w),
                ratio_phi: ratio(phi_star),
                cv_phi: phi_star.map(|s| s.cv()),
                repaired_w,
                phi_star,
                lambda_star: Stats::of(&l),
            }
        })
        .collect();
    SummaryTable { cells }
}
