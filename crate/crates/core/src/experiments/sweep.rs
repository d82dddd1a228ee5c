use std::time::Instant;

use serde::Serialize;

use super::config::SweepConfig;
use super::summary::{summarize, SummaryTable};
use super::trial::{run_trial_with, CellPrediction, TrialMode, TrialRecord, TrialSpec};
use crate::error::Result;
use crate::theory::SeriesConfig;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of replicate `rep` in cell `cell`; independent of execution order.
pub fn replicate_seed(master_seed: u64, cell: usize, rep: usize) -> u64 {
    let s = splitmix64(master_seed);
    let s = splitmix64(s ^ cell as u64);
    splitmix64(s ^ (rep as u64).rotate_left(32))
}

/// A cell of a sweep: its spec template and prediction.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub index: usize,
    pub spec: TrialSpec,
    pub prediction: CellPrediction,
}

/// Resolves budgets and predictions for every cell.
pub fn plan_cells(cfg: &SweepConfig, series: &SeriesConfig) -> Result<Vec<Cell>> {
    cfg.validate()?;
    cfg.n_values
        .iter()
        .enumerate()
        .map(|(index, &n)| {
            let c0 = cfg.c0_rule.budget(n, series)?;
            let mode = match cfg.fixed_lambda {
                Some(lambda) => TrialMode::FixedLambda { lambda },
                None => TrialMode::Constrained { tighten_budget: cfg.tighten_budget },
            };
            let spec = TrialSpec { n, gamma: cfg.gamma, c0, seed: 0, tol: cfg.tol, mode };
            let prediction = CellPrediction::for_spec(&spec, series)?;
            Ok(Cell { index, spec, prediction })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub summary: SummaryTable,
}

fn run_one(cfg: &SweepConfig, cell: &Cell, rep: usize) -> Result<(usize, usize, TrialRecord)> {
    let spec = TrialSpec { seed: replicate_seed(cfg.master_seed, cell.index, rep), ..cell.spec };
    let start = cfg.timing.then(Instant::now);
    let mut r = run_trial_with(&spec, &cell.prediction)?;
    if let Some(t) = start {
        r.wall_time_ms = t.elapsed().as_secs_f64() * 1e3;
    }
    Ok((cell.index, rep, r))
}

/// Runs every replicate of every cell, on the current rayon pool when the
/// `parallel` feature is on. Records come back sorted by (cell, replicate).
pub fn run_sweep(cfg: &SweepConfig, series: &SeriesConfig) -> Result<SweepOutput> {
    let cells = plan_cells(cfg, series)?;
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.replicates).map(move |r| (c, r)))
        .collect();

    #[cfg(feature = "parallel")]
    let results: Vec<Result<(usize, usize, TrialRecord)>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(|&(c, r)| run_one(cfg, &cells[c], r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<(usize, usize, TrialRecord)>> =
        jobs.iter().map(|&(c, r)| run_one(cfg, &cells[c], r)).collect();

    let mut keyed = results.into_iter().collect::<Result<Vec<_>>>()?;
    keyed.sort_by_key(|&(c, r, _)| (c, r));
    let records: Vec<TrialRecord> = keyed.into_iter().map(|(_, _, r)| r).collect();
    let summary = summarize(&records);
    Ok(SweepOutput { records, summary })
}

/// [`run_sweep`] on a dedicated pool with `threads` workers.
#[cfg(feature = "parallel")]
pub fn run_sweep_with_threads(cfg: &SweepConfig, series: &SeriesConfig, threads: usize) -> Result<SweepOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::error::Error::Config(e.to_string()))?;
    pool.install(|| run_sweep(cfg, series))
}
