//! Seeded Monte Carlo trials and sweeps comparing solver output with the
//! theory predictions.

mod config;
mod csv;
mod summary;
mod sweep;
mod trial;

pub use config::{C0Rule, SweepConfig};
pub use csv::{write_csv, CSV_HEADER};
pub use summary::{summarize, CellSummary, Stats, SummaryTable};
#[cfg(feature = "parallel")]
pub use sweep::run_sweep_with_threads;
pub use sweep::{plan_cells, replicate_seed, run_sweep, Cell, SweepOutput};
pub use trial::{run_trial, run_trial_with, CellPrediction, TrialMode, TrialRecord, TrialSpec};
