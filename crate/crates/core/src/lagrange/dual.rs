use std::cell::Cell;

use serde::Serialize;

use super::repair::gr_repair;
use crate::error::{invalid, Error, Result};
use crate::instances::tree::lagrangian_mst;
use crate::instances::{mst, Edge, Instance, SpanningTree};

/// One evaluation of the dual function.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint {
    pub lambda: f64,
    /// A tree minimising `W(T) + lambda C(T)`.
    pub tree: SpanningTree,
    /// `W(T) + lambda (C(T) - c0)`.
    pub phi: f64,
    /// `C(T) - c0`.
    pub slack: f64,
}

impl DualPoint {
    fn new(tree: SpanningTree, lambda: f64, c0: f64) -> Self {
        let slack = tree.total_cost() - c0;
        DualPoint {
            lambda,
            phi: tree.total_weight() + lambda * slack,
            slack,
            tree,
        }
    }
}

/// Evaluates `phi(lambda)` with one MST call on `W_e + lambda C_e`.
pub fn phi(inst: &Instance, lambda: f64, c0: f64) -> Result<DualPoint> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(invalid(format!("budget must be finite and >= 0, got {c0}")));
    }
    Ok(DualPoint::new(lagrangian_mst(inst, lambda), lambda, c0))
}

/// Default bisection tolerance on the multiplier: `1e-9 n`.
pub fn default_tol(n: usize) -> f64 {
    1e-9 * n as f64
}

/// Result of maximising the dual, together with the repaired primal tree.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub c0: f64,
    pub tol: f64,
    pub lambda_star: f64,
    pub phi_star: f64,
    /// Lagrangian-optimal tree with positive slack; absent when `lambda_star = 0`.
    pub tree_minus: Option<SpanningTree>,
    /// Lagrangian-optimal tree with non-positive slack.
    pub tree_plus: SpanningTree,
    pub repaired: SpanningTree,
    pub bracket_width: f64,
    pub mst_calls: usize,
    /// The multiplier had to grow past `8n` to reach a feasible Lagrangian tree.
    pub hit_lambda_cap: bool,
    /// `lambda_star` is a breakpoint at which both bracketing trees are
    /// simultaneously optimal (otherwise it is the bracket midpoint).
    pub exact_breakpoint: bool,
}

#[derive(Serialize)]
pub struct TreeSummary {
    pub edges: Vec<Edge>,
    #[serde(rename = "W")]
    pub weight: f64,
    #[serde(rename = "C")]
    pub cost: f64,
}

impl From<&SpanningTree> for TreeSummary {
    fn from(t: &SpanningTree) -> Self {
        TreeSummary {
            edges: t.edges().to_vec(),
            weight: t.total_weight(),
            cost: t.total_cost(),
        }
    }
}

#[derive(Serialize)]
struct DualSolutionJson {
    lambda_star: f64,
    phi_star: f64,
    slack_minus: Option<f64>,
    slack_plus: f64,
    repaired: TreeSummary,
    bracket_width: f64,
    mst_calls: usize,
}

impl DualSolution {
    pub fn slack_minus(&self) -> Option<f64> {
        self.tree_minus.as_ref().map(|t| t.total_cost() - self.c0)
    }

    pub fn slack_plus(&self) -> f64 {
        self.tree_plus.total_cost() - self.c0
    }

    /// `{lambda_star, phi_star, slack_minus, slack_plus, repaired: {edges, W, C},
    /// bracket_width, mst_calls}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DualSolutionJson {
            lambda_star: self.lambda_star,
            phi_star: self.phi_star,
            slack_minus: self.slack_minus(),
            slack_plus: self.slack_plus(),
            repaired: (&self.repaired).into(),
            bracket_width: self.bracket_width,
            mst_calls: self.mst_calls,
        })
        .expect("plain data serializes")
    }
}

/// Maximises `phi` over `lambda >= 0`.
///
/// If the unconstrained MST already fits the budget the optimum is
/// `lambda = 0`. Otherwise the slack sign is bisected on `[0, 8n]` down to
/// width `tol`, and the bracket is then closed onto the breakpoint where the
/// affine pieces of its two trees intersect, repeating until both trees are
/// optimal there. The bracketing trees are handed to [`gr_repair`].
pub fn maximize_dual(inst: &Instance, c0: f64, tol: f64) -> Result<DualSolution> {
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(invalid(format!("budget must be finite and > 0, got {c0}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be finite and > 0, got {tol}")));
    }
    let n = inst.n();
    let calls = Cell::new(0usize);
    let eval = |lambda: f64| {
        calls.set(calls.get() + 1);
        DualPoint::new(lagrangian_mst(inst, lambda), lambda, c0)
    };

    let start = eval(0.0);
    if start.slack <= 0.0 {
        let mut sol = DualSolution {
            c0,
            tol,
            lambda_star: 0.0,
            phi_star: start.phi,
            tree_minus: None,
            repaired: start.tree.clone(),
            tree_plus: start.tree,
            bracket_width: 0.0,
            mst_calls: calls.get(),
            hit_lambda_cap: false,
            exact_breakpoint: true,
        };
        sol.repaired = gr_repair(inst, c0, &sol)?;
        return Ok(sol);
    }

    let cap = 8.0 * n as f64;
    let mut hi = eval(cap);
    let mut hit_lambda_cap = false;
    if hi.slack > 0.0 {
        let cheapest = mst(inst, |u, v| inst.cost(u, v));
        calls.set(calls.get() + 1);
        if cheapest.total_cost() > c0 {
            return Err(Error::Infeasible {
                min_cost: cheapest.total_cost(),
                c0,
            });
        }
        hit_lambda_cap = true;
        let mut lambda = cap;
        for _ in 0..64 {
            lambda *= 2.0;
            hi = eval(lambda);
            if hi.slack <= 0.0 {
                break;
            }
        }
        if hi.slack > 0.0 {
            hi = DualPoint::new(cheapest, lambda, c0);
        }
    }

    let mut lo = start;
    while hi.lambda - lo.lambda > tol {
        let mid = 0.5 * (lo.lambda + hi.lambda);
        let p = eval(mid);
        if p.slack > 0.0 {
            lo = p;
        } else {
            hi = p;
        }
    }

    let mut at_breakpoint = None;
    for _ in 0..200 {
        let (wl, cl) = (lo.tree.total_weight(), lo.tree.total_cost());
        let (wh, ch) = (hi.tree.total_weight(), hi.tree.total_cost());
        let cross = ((wh - wl) / (cl - ch)).clamp(lo.lambda, hi.lambda);
        let p = eval(cross);
        let best = p.tree.lagrangian(cross);
        let eps = 1e-12 * (1.0 + best.abs());
        if lo.tree.lagrangian(cross) <= best + eps && hi.tree.lagrangian(cross) <= best + eps {
            at_breakpoint = Some(p);
            break;
        }
        if p.slack > 0.0 {
            lo = p;
        } else {
            hi = p;
        }
    }

    let (lambda_star, phi_star, exact_breakpoint) = match &at_breakpoint {
        Some(p) => (p.lambda, p.phi.max(lo.phi).max(hi.phi), true),
        None => (0.5 * (lo.lambda + hi.lambda), lo.phi.max(hi.phi), false),
    };
    let mut sol = DualSolution {
        c0,
        tol,
        lambda_star,
        phi_star,
        bracket_width: hi.lambda - lo.lambda,
        repaired: hi.tree.clone(),
        tree_minus: Some(lo.tree),
        tree_plus: hi.tree,
        mst_calls: calls.get(),
        hit_lambda_cap,
        exact_breakpoint,
    };
    sol.repaired = gr_repair(inst, c0, &sol)?;
    Ok(sol)
}
