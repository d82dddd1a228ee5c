//! Browser bindings: regime prediction, theory curves and a small solve.
//!
//! Every export returns a JSON string; errors become JavaScript exceptions.

use cmst_core::instances::sample_instance;
use cmst_core::lagrange::{default_tol, phi, solve_with_tightening, tree_edge_maxima};
use cmst_core::theory::{self, SeriesConfig};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Regime, predicted `W*`, `β*` and `λ*` for `(n, c0, γ)`.
pub fn predict_json(n: u32, c0: f64, gamma: f64, extrapolate: bool) -> Result<String, String> {
    let cfg = SeriesConfig::default();
    let p = theory::predict_wstar(n as usize, c0, gamma, extrapolate, &cfg).map_err(err)?;
    serde_json::to_string(&p).map_err(err)
}

/// `f`, `f'` and `g` on `points` evenly spaced values of `β` in `[0, beta_max]`.
pub fn curves_json(beta_max: f64, points: u32) -> Result<String, String> {
    if !(beta_max > 0.0 && beta_max <= 1e4) || !(2..=2000).contains(&points) {
        return Err("beta_max must lie in (0, 1e4] and points in [2, 2000]".into());
    }
    let cfg = SeriesConfig { rel_tol: 1e-9, ..SeriesConfig::default() };
    let mut beta = Vec::new();
    let mut f = Vec::new();
    let mut fp = Vec::new();
    let mut g = Vec::new();
    for i in 0..points {
        let b = beta_max * i as f64 / (points - 1) as f64;
        let fv = theory::f(b, &cfg).map_err(err)?.value;
        let dv = theory::f_prime(b, &cfg).map_err(err)?.value;
        beta.push(b);
        f.push(fv);
        fp.push(dv);
        g.push(fv - b * dv);
    }
    Ok(json!({ "beta": beta, "f": f, "f_prime": fp, "g": g }).to_string())
}

/// Samples an instance, solves it, and samples `phi` on `[0, 2 λ*]`.
pub fn solve_json(n: u32, gamma: f64, seed: u64, c0: f64, tighten: bool) -> Result<String, String> {
    let n = n as usize;
    if !(2..=400).contains(&n) {
        return Err("n must lie in [2, 400] in the browser".into());
    }
    let inst = sample_instance(n, gamma, seed).map_err(err)?;
    let t = solve_with_tightening(&inst, c0, default_tol(n)).map_err(err)?;
    let (sol, tree) = if tighten {
        (t.final_solution(), t.final_tree())
    } else {
        (&t.original, &t.original.repaired)
    };
    let lam = t.original.lambda_star;
    let hi = if lam > 0.0 { 2.0 * lam } else { 1.0 };
    let mut lambda = Vec::new();
    let mut values = Vec::new();
    for i in 0..=120 {
        let l = hi * i as f64 / 120.0;
        lambda.push(l);
        values.push(phi(&inst, l, c0).map_err(err)?.phi);
    }
    let (z_max, c_max) = tree_edge_maxima(tree, &inst, sol.lambda_star);
    let prediction = theory::predict_wstar(n.max(3), c0, gamma, false, &SeriesConfig::default())
        .ok()
        .and_then(|p| p.w_star_predicted);
    Ok(json!({
        "lambda_star": lam,
        "phi_star": t.original.phi_star,
        "c0_hat": t.c0_hat,
        "repaired_W": tree.total_weight(),
        "repaired_C": tree.total_cost(),
        "feasible": tree.total_cost() <= c0,
        "z_max": z_max,
        "c_max": c_max,
        "mst_calls": t.original.mst_calls + t.tightened.as_ref().map_or(0, |s| s.mst_calls),
        "predicted_W": prediction,
        "curve": { "lambda": lambda, "phi": values },
    })
    .to_string())
}

#[wasm_bindgen]
pub fn predict(n: u32, c0: f64, gamma: f64, extrapolate: bool) -> Result<String, JsValue> {
    to_js(predict_json(n, c0, gamma, extrapolate))
}

#[wasm_bindgen]
pub fn curves(beta_max: f64, points: u32) -> Result<String, JsValue> {
    to_js(curves_json(beta_max, points))
}

#[wasm_bindgen]
pub fn solve(n: u32, gamma: f64, seed: u64, c0: f64, tighten: bool) -> Result<String, JsValue> {
    to_js(solve_json(n, gamma, seed, c0, tighten))
}
