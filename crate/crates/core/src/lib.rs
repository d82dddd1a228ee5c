//! Random minimum spanning trees with a random cost budget.
//!
//! Every edge of the complete graph `K_n` carries an independent weight and
//! cost, each distributed as `U^gamma`. The crate solves
//! `min W(T) s.t. C(T) <= c0` through its Lagrangian dual, repairs the dual
//! trees into a near-feasible primal tree by single edge exchanges, evaluates
//! the closed-form large-`n` predictions for the optimum, and runs seeded
//! Monte Carlo sweeps that compare the two.
//!
//! Modules:
//! - [`instances`]: sampling, dense MST, spanning-tree enumeration, exact oracle.
//! - [`lagrange`]: dual evaluation and maximisation, exchange repair.
//! - [`theory`]: special functions, series constants, regime predictions.
//! - [`experiments`]: trials, sweeps, CSV records and summaries.
//! - [`selftest`]: reduced-scale invariant checks used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod instances;
pub mod lagrange;
pub mod selftest;
pub mod theory;

pub use error::{Error, Result};
pub use instances::{Edge, Instance, SpanningTree};
pub use lagrange::{DualPoint, DualSolution};
pub use theory::{Regime, RegimePrediction, SeriesConfig, SeriesValue};
