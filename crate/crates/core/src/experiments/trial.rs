use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::instances::{mst, sample_instance, Instance, SpanningTree};
use crate::lagrange::{
    default_tol, maximize_dual, phi, solve_with_tightening, tree_edge_maxima, DualSolution,
};
use crate::theory::{expected_ln, predict_wstar, LambdaRange, SeriesConfig};

/// Whether a trial maximises the dual or evaluates it at a fixed multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialMode {
    Constrained { tighten_budget: bool },
    FixedLambda { lambda: f64 },
}

/// Inputs of a single replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialSpec {
    pub n: usize,
    pub gamma: f64,
    pub c0: f64,
    pub seed: u64,
    pub tol: Option<f64>,
    pub mode: TrialMode,
}

impl TrialSpec {
    pub fn constrained(n: usize, gamma: f64, c0: f64, seed: u64, tol: Option<f64>, tighten_budget: bool) -> Self {
        Self { n, gamma, c0, seed, tol, mode: TrialMode::Constrained { tighten_budget } }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| default_tol(self.n))
    }
}

/// Prediction attached to every record of a cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellPrediction {
    pub predicted_w: Option<f64>,
    pub regime: String,
}

impl CellPrediction {
    pub fn for_spec(spec: &TrialSpec, series: &SeriesConfig) -> Result<Self> {
        match spec.mode {
            TrialMode::Constrained { .. } => {
                let p = predict_wstar(spec.n, spec.c0, spec.gamma, false, series)?;
                Ok(Self { predicted_w: p.w_star_predicted, regime: p.regime.to_string() })
            }
            TrialMode::FixedLambda { lambda } => {
                let regime = if spec.gamma < 1.0 {
                    "lagrangian_gamma".to_string()
                } else {
                    match LambdaRange::classify(spec.n, lambda) {
                        LambdaRange::Small => "lagrangian_small",
                        LambdaRange::Mid => "lagrangian_mid",
                        LambdaRange::Large => "lagrangian_large",
                    }
                    .to_string()
                };
                match expected_ln(spec.n, lambda, spec.gamma, series) {
                    Ok(v) => Ok(Self { predicted_w: Some(v.value - lambda * spec.c0), regime }),
                    Err(Error::NoPrediction(_)) => Ok(Self { predicted_w: None, regime: "out_of_range".into() }),
                    Err(e) => Err(e),
                }
            }
        }
    }
}

/// One Monte Carlo replicate.
///
/// In fixed-multiplier mode `phi_star` is `phi(lambda)` and the repaired tree
/// is the Lagrangian MST itself. Instances whose cheapest tree exceeds the
/// budget produce a row with `NaN` dual fields, the cheapest tree as the
/// repaired tree and regime `case3_infeasible`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub gamma: f64,
    pub c0: f64,
    pub lambda_star: f64,
    pub phi_star: f64,
    #[serde(rename = "repaired_W")]
    pub repaired_w: f64,
    #[serde(rename = "repaired_C")]
    pub repaired_c: f64,
    pub feasible: bool,
    pub z_max: f64,
    pub c_max: f64,
    #[serde(rename = "predicted_W")]
    pub predicted_w: Option<f64>,
    pub regime: String,
    pub mst_calls: usize,
    pub wall_time_ms: f64,
    pub tol: f64,
    pub fixed_lambda: bool,
}

impl TrialRecord {
    /// `phi_star <= repaired_W + tol (1 + lambda*)` on feasible rows and
    /// `repaired_C <= c0 + c_max` on constrained rows.
    pub fn check_invariants(&self) -> Result<()> {
        if self.lambda_star.is_nan() {
            return Ok(());
        }
        let slack = self.tol * (1.0 + self.lambda_star);
        if self.feasible && self.phi_star > self.repaired_w + slack {
            return Err(invalid(format!(
                "seed {}: phi_star {} exceeds repaired_W {} + {}",
                self.seed, self.phi_star, self.repaired_w, slack
            )));
        }
        let eps = 1e-9 * (1.0 + self.c0.abs());
        if !self.fixed_lambda && self.repaired_c > self.c0 + self.c_max + eps {
            return Err(invalid(format!(
                "seed {}: repaired_C {} exceeds c0 {} + c_max {}",
                self.seed, self.repaired_c, self.c0, self.c_max
            )));
        }
        Ok(())
    }
}

fn record(spec: &TrialSpec, pred: &CellPrediction, tree: &SpanningTree, lambda: f64, inst: &Instance) -> TrialRecord {
    let (z_max, c_max) = tree_edge_maxima(tree, inst, if lambda.is_nan() { 0.0 } else { lambda });
    TrialRecord {
        seed: spec.seed,
        n: spec.n,
        gamma: spec.gamma,
        c0: spec.c0,
        lambda_star: lambda,
        phi_star: f64::NAN,
        repaired_w: tree.total_weight(),
        repaired_c: tree.total_cost(),
        feasible: tree.total_cost() <= spec.c0,
        z_max,
        c_max,
        predicted_w: pred.predicted_w,
        regime: pred.regime.clone(),
        mst_calls: 0,
        wall_time_ms: 0.0,
        tol: spec.tol(),
        fixed_lambda: matches!(spec.mode, TrialMode::FixedLambda { .. }),
    }
}

fn from_solution(spec: &TrialSpec, pred: &CellPrediction, inst: &Instance, sol: &DualSolution, tree: &SpanningTree, calls: usize) -> TrialRecord {
    let mut r = record(spec, pred, tree, sol.lambda_star, inst);
    r.phi_star = sol.phi_star;
    r.mst_calls = calls;
    r
}

/// Runs one replicate against a precomputed cell prediction.
pub fn run_trial_with(spec: &TrialSpec, pred: &CellPrediction) -> Result<TrialRecord> {
    let inst = sample_instance(spec.n, spec.gamma, spec.seed)?;
    let tol = spec.tol();
    match spec.mode {
        TrialMode::FixedLambda { lambda } => {
            let p = phi(&inst, lambda, spec.c0)?;
            let mut r = record(spec, pred, &p.tree, lambda, &inst);
            r.phi_star = p.phi;
            r.mst_calls = 1;
            Ok(r)
        }
        TrialMode::Constrained { tighten_budget } => {
            let solved = if tighten_budget {
                solve_with_tightening(&inst, spec.c0, tol).map(|t| {
                    let calls = t.original.mst_calls + t.tightened.as_ref().map_or(0, |s| s.mst_calls);
                    let fin = t.final_solution();
                    let mut r = from_solution(spec, pred, &inst, &t.original, t.final_tree(), calls);
                    let (z, c) = tree_edge_maxima(t.final_tree(), &inst, fin.lambda_star);
                    r.z_max = z;
                    r.c_max = c;
                    r
                })
            } else {
                maximize_dual(&inst, spec.c0, tol)
                    .map(|s| from_solution(spec, pred, &inst, &s, &s.repaired, s.mst_calls))
            };
            match solved {
                Ok(r) => Ok(r),
                Err(Error::Infeasible { .. }) => {
                    let cheapest = mst(&inst, |u, v| inst.cost(u, v));
                    let mut r = record(spec, pred, &cheapest, f64::NAN, &inst);
                    r.regime = "case3_infeasible".into();
                    r.mst_calls = 1;
                    Ok(r)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Generates the instance for `spec`, solves it, and attaches the theory prediction.
pub fn run_trial(spec: &TrialSpec, series: &SeriesConfig) -> Result<TrialRecord> {
    let pred = CellPrediction::for_spec(spec, series)?;
    run_trial_with(spec, &pred)
}
