//! Reduced-scale invariant checks covering instances, the dual solver and the
//! theory module. Used by the `selftest` CLI subcommand.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instances::{
    enumerate_spanning_trees, exact_constrained_mst, mst, random_spanning_tree, sample_instance,
    Instance, SpanningTree,
};
use crate::lagrange::{default_tol, maximize_dual, phi, solve_with_tightening, tree_edge_maxima};
use crate::theory::{
    c1_const, c_gamma_const, expected_min_ugamma, f, f_prime, g, phat, phat_gamma, phat_inv,
    predict_wstar, solve_beta_case2, solve_beta_case3, t0_threshold, zeta3, SeriesConfig,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

fn sampling() -> Result<(), String> {
    let a = sample_instance(25, 0.5, 9).map_err(err)?;
    let b = sample_instance(25, 0.5, 9).map_err(err)?;
    ensure(a == b, || "same seed gave different instances".into())?;
    for u in 0..25 {
        for v in u + 1..25 {
            let (w, c) = (a.weight(u, v), a.cost(u, v));
            ensure(w > 0.0 && w < 1.0 && c > 0.0 && c < 1.0, || format!("value outside (0,1) at {u},{v}"))?;
        }
    }
    let back = Instance::from_json(&a.to_json()).map_err(err)?;
    ensure(back == a, || "JSON round trip changed the instance".into())
}

fn tree_counts() -> Result<(), String> {
    for n in 3..=7usize {
        let count = enumerate_spanning_trees(n).map_err(err)?.count();
        let want = n.pow(n as u32 - 2);
        ensure(count == want, || format!("n = {n}: {count} trees, expected {want}"))?;
    }
    Ok(())
}

fn exhaustive_min(inst: &Instance) -> Result<f64, String> {
    let mut best = f64::INFINITY;
    for edges in enumerate_spanning_trees(inst.n()).map_err(err)? {
        best = best.min(SpanningTree::from_edges(inst, edges).map_err(err)?.total_weight());
    }
    Ok(best)
}

fn mst_is_minimal() -> Result<(), String> {
    for seed in 0..10 {
        let inst = sample_instance(6, 1.0, seed).map_err(err)?;
        let t = mst(&inst, |u, v| inst.weight(u, v));
        let best = exhaustive_min(&inst)?;
        ensure((t.total_weight() - best).abs() < 1e-12, || format!("seed {seed}: MST not minimal"))?;
    }
    Ok(())
}

fn weak_duality() -> Result<(), String> {
    for seed in 0..30u64 {
        let n = 4 + (seed % 3) as usize;
        let inst = sample_instance(n, 1.0, 100 + seed).map_err(err)?;
        let cheapest = mst(&inst, |u, v| inst.cost(u, v)).total_cost();
        let c0 = cheapest + 0.4 * ((n - 1) as f64 - cheapest);
        let exact = exact_constrained_mst(&inst, c0).map_err(err)?.ok_or("oracle found no tree")?;
        let tol = default_tol(n);
        let sol = maximize_dual(&inst, c0, tol).map_err(err)?;
        ensure(sol.phi_star <= exact.total_weight() + 1e-9, || format!("seed {seed}: phi* above W*"))?;
        let (_, cmax) = tree_edge_maxima(&sol.repaired, &inst, sol.lambda_star);
        ensure(sol.repaired.total_cost() <= c0 + cmax + 1e-12, || format!("seed {seed}: repair over budget"))?;
        ensure(sol.repaired.total_weight() <= sol.phi_star + tol * (1.0 + sol.lambda_star), || {
            format!("seed {seed}: repaired weight above phi*")
        })?;
    }
    Ok(())
}

fn dual_shape() -> Result<(), String> {
    let inst = sample_instance(30, 1.0, 4).map_err(err)?;
    let c0 = 3.0;
    let grid: Vec<f64> = (0..60).map(|i| i as f64 * 0.25).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| phi(&inst, l, c0).map(|p| p.phi)).collect::<Result<_, _>>().map_err(err)?;
    for i in 1..vals.len() - 1 {
        ensure(vals[i] + 1e-12 >= 0.5 * (vals[i - 1] + vals[i + 1]), || format!("phi not concave near {}", grid[i]))?;
    }
    let sol = maximize_dual(&inst, c0, default_tol(30)).map_err(err)?;
    let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ensure(sol.phi_star + 1e-12 >= top, || "phi* below a grid value".into())?;
    let big = phi(&inst, 1e6, c0).map_err(err)?;
    let cheap = mst(&inst, |u, v| inst.cost(u, v));
    ensure(big.tree.total_cost() == cheap.total_cost(), || "large multiplier is not the cost MST".into())
}

fn random_trees_bound() -> Result<(), String> {
    let inst = sample_instance(12, 1.0, 77).map_err(err)?;
    let c0 = 2.5;
    let sol = maximize_dual(&inst, c0, default_tol(12)).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let t = SpanningTree::from_edges(&inst, random_spanning_tree(12, &mut rng)).map_err(err)?;
        if t.total_cost() <= c0 {
            ensure(t.total_weight() + 1e-9 >= sol.phi_star, || "feasible tree below phi*".into())?;
        }
    }
    Ok(())
}

fn tightening() -> Result<(), String> {
    let inst = sample_instance(40, 1.0, 3).map_err(err)?;
    let t = solve_with_tightening(&inst, 5.0, default_tol(40)).map_err(err)?;
    ensure(t.c0_hat <= 5.0, || "tightened budget above c0".into())
}

fn constants() -> Result<(), String> {
    let z = zeta3(&cfg()).map_err(err)?;
    ensure((z.value - 1.202_056_903_159_594).abs() < 1e-12, || format!("zeta3 = {}", z.value))?;
    let c1 = c1_const(&cfg()).map_err(err)?.value;
    ensure((c1 - 1.42).abs() < 0.01, || format!("c1 = {c1}"))?;
    let cg = c_gamma_const(1.0, &cfg()).map_err(err)?.value;
    ensure((cg - c1).abs() < 1e-10, || "C_1 differs from c1".into())?;
    for n in [1usize, 7, 100] {
        let m = expected_min_ugamma(n, 1.0).map_err(err)?;
        ensure(m.exact == 1.0 / (n as f64 + 1.0), || format!("E min at n = {n}"))?;
    }
    Ok(())
}

fn f_family() -> Result<(), String> {
    let z = zeta3(&cfg()).map_err(err)?.value;
    ensure((f(0.0, &cfg()).map_err(err)?.value - z).abs() < 1e-9, || "f(0) != zeta3".into())?;
    ensure(f_prime(0.0, &cfg()).map_err(err)?.value == 1.0, || "f'(0) != 1".into())?;
    ensure((g(0.0, &cfg()).map_err(err)?.value - z).abs() < 1e-9, || "g(0) != zeta3".into())?;
    let grid: Vec<f64> = (0..60).map(|i| 1e-3 * (3e4f64).powf(i as f64 / 59.0)).collect();
    let mut prev: Option<(f64, f64, f64)> = None;
    for &b in &grid {
        let cur = (
            f(b, &cfg()).map_err(err)?.value,
            f_prime(b, &cfg()).map_err(err)?.value,
            g(b, &cfg()).map_err(err)?.value,
        );
        if let Some(p) = prev {
            ensure(cur.0 > p.0 && cur.2 > p.2, || format!("f or g not increasing at {b}"))?;
            ensure(cur.1 < p.1, || format!("f' not decreasing at {b}"))?;
        }
        prev = Some(cur);
    }
    Ok(())
}

fn roots() -> Result<(), String> {
    ensure(solve_beta_case2(0.5, &cfg()).map_err(err)? == 0.0, || "beta*(1/2) != 0".into())?;
    for a in [0.1, 0.25, 0.4] {
        let b = solve_beta_case2(a, &cfg()).map_err(err)?;
        let r = (f_prime(b, &cfg()).map_err(err)?.value - 2.0 * a).abs();
        ensure(r <= 1e-10, || format!("case 2 residual {r} at alpha {a}"))?;
    }
    for a in [1.5, 2.0, 4.0] {
        let b = solve_beta_case3(a, &cfg()).map_err(err)?;
        let r = (g(b, &cfg()).map_err(err)?.value - a).abs();
        ensure(r <= 1e-10, || format!("case 3 residual {r} at alpha {a}"))?;
    }
    let z = zeta3(&cfg()).map_err(err)?.value;
    let p = predict_wstar(10_000, 5_000.0, 1.0, false, &cfg()).map_err(err)?;
    ensure(p.w_star_predicted.is_some_and(|w| (w - z).abs() < 1e-6), || "alpha = 1/2 prediction".into())
}

fn geometry() -> Result<(), String> {
    for l in [0.01, 0.5, 1.0, 2.0, 100.0] {
        let mut prev = 0.0;
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let q = phat(p, l).map_err(err)?;
            ensure(q >= prev, || format!("phat decreasing at lambda {l}"))?;
            prev = q;
            let back = phat_inv(q, l).map_err(err)?;
            ensure((back - p).abs() <= 1e-12, || format!("round trip {p} -> {back} at lambda {l}"))?;
        }
    }
    let t = t0_threshold(1_000_000, 4.0, 0.5).map_err(err)?;
    if t.below_one {
        let v = phat_gamma(t.t0, 4.0, 0.5).map_err(err)?;
        let want = 1000.0 * 1e6f64.ln() / 1e6;
        ensure((v - want).abs() < 1e-10, || "t0 round trip".into())?;
    }
    Ok(())
}

const CHECKS: &[(&str, Check)] = &[
    ("instances.sampling", sampling),
    ("instances.tree_counts", tree_counts),
    ("instances.mst_minimal", mst_is_minimal),
    ("lagrange.weak_duality_and_repair", weak_duality),
    ("lagrange.dual_shape", dual_shape),
    ("lagrange.random_tree_bound", random_trees_bound),
    ("lagrange.tightening", tightening),
    ("theory.constants", constants),
    ("theory.f_family", f_family),
    ("theory.roots", roots),
    ("theory.geometry", geometry),
];

/// Runs every check and collects the outcomes.
pub fn run_selftest() -> SelftestReport {
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok(()) => CheckResult { name, passed: true, detail: String::new() },
            Err(detail) => CheckResult { name, passed: false, detail },
        })
        .collect();
    SelftestReport { checks }
}
