//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cmst_core::experiments::{run_sweep, run_sweep_with_threads, write_csv, C0Rule, SweepConfig};
use cmst_core::instances::{exact_constrained_mst, mst, sample_instance};
use cmst_core::lagrange::{default_tol, maximize_dual, tree_edge_maxima};
use cmst_core::theory::{
    c1_const, c_gamma_const, expected_ln, expected_min_ugamma, f, f_prime, g, phat, phat_gamma,
    phat_inv, predict_wstar, solve_beta_case2, solve_beta_case3, zeta3, SeriesConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn series() -> SeriesConfig {
    SeriesConfig::default()
}

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn fixed_lambda_sweep(n: usize, lambda: f64, replicates: usize, seed: u64) -> SweepConfig {
    SweepConfig {
        n_values: vec![n],
        gamma: 1.0,
        c0_rule: C0Rule::Absolute { value: 0.0 },
        replicates,
        master_seed: seed,
        tol: None,
        tighten_budget: false,
        fixed_lambda: Some(lambda),
        timing: false,
    }
}

fn mean_phi(cfg: &SweepConfig) -> Result<(f64, f64), String> {
    let out = run_sweep(cfg, &series()).map_err(|e| e.to_string())?;
    let s = out.summary.cells[0].phi_star.ok_or("no statistics")?;
    Ok((s.mean, s.cv()))
}

fn oracle_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..200u64 {
        let n = rng.gen_range(4..=7usize);
        let inst = sample_instance(n, 1.0, 10_000 + i).map_err(|e| e.to_string())?;
        let cheapest = mst(&inst, |u, v| inst.cost(u, v)).total_cost();
        let c0 = rng.gen_range(cheapest..=(n - 1) as f64);
        let exact = exact_constrained_mst(&inst, c0)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("instance {i}: oracle found no feasible tree"))?;
        let tol = default_tol(n);
        let sol = maximize_dual(&inst, c0, tol).map_err(|e| e.to_string())?;
        check(
            sol.phi_star <= exact.total_weight() + 1e-9,
            format!("instance {i}: phi* = {} > W* = {}", sol.phi_star, exact.total_weight()),
        )?;
        let (_, c_max) = tree_edge_maxima(&sol.repaired, &inst, sol.lambda_star);
        check(
            sol.repaired.total_cost() <= c0 + c_max,
            format!("instance {i}: C(T) = {} > c0 + c_max = {}", sol.repaired.total_cost(), c0 + c_max),
        )?;
        let bound = sol.phi_star + tol * (1.0 + sol.lambda_star);
        check(
            sol.repaired.total_weight() <= bound,
            format!("instance {i}: W(T) = {} > phi* + slack = {bound}", sol.repaired.total_weight()),
        )?;
        worst_gap = worst_gap.max(sol.phi_star - exact.total_weight());
    }
    Ok(format!("200 instances, max(phi* - W*) = {worst_gap:.3e}"))
}

fn unconstrained_baseline() -> Outcome {
    let z = zeta3(&series()).map_err(|e| e.to_string())?.value;
    let mut total = 0.0;
    for rep in 0..50u64 {
        let inst = sample_instance(300, 1.0, 500 + rep).map_err(|e| e.to_string())?;
        total += mst(&inst, |u, v| inst.weight(u, v)).total_weight();
    }
    let mean = total / 50.0;
    let rel = (mean / z - 1.0).abs();
    check(rel <= 0.05, format!("mean {mean:.4} vs zeta3 {z:.4}, rel {rel:.3}"))?;
    Ok(format!("mean MST weight {mean:.4}, zeta(3) = {z:.4}, rel err {rel:.3}"))
}

fn mid_regime() -> Outcome {
    let c1 = c1_const(&series()).map_err(|e| e.to_string())?.value;
    let (mean, _) = mean_phi(&fixed_lambda_sweep(500, 1.0, 30, 31))?;
    let want = c1 * 500f64.sqrt();
    let rel = (mean / want - 1.0).abs();
    check(rel <= 0.10, format!("mean {mean:.3} vs c1 sqrt(500) = {want:.3}, rel {rel:.3}"))?;
    Ok(format!("mean L_n {mean:.3}, c1 sqrt(500) = {want:.3}, rel err {rel:.3}"))
}

fn small_lambda() -> Outcome {
    let mut parts = Vec::new();
    for (beta, seed) in [(0.5, 41u64), (2.0, 42)] {
        let lambda = 2.0 * beta / 500.0;
        let (mean, _) = mean_phi(&fixed_lambda_sweep(500, lambda, 30, seed))?;
        let want = f(beta, &series()).map_err(|e| e.to_string())?.value;
        let rel = (mean / want - 1.0).abs();
        check(rel <= 0.10, format!("beta {beta}: mean {mean:.4} vs f = {want:.4}, rel {rel:.3}"))?;
        parts.push(format!("beta {beta}: mean {mean:.4}, f {want:.4}, rel {rel:.3}"));
    }
    Ok(parts.join("; "))
}

fn case1_sandwich() -> Outcome {
    let c1 = c1_const(&series()).map_err(|e| e.to_string())?.value;
    let mut trend = Vec::new();
    let mut at_1000 = None;
    for (i, n) in [250usize, 500, 1000].into_iter().enumerate() {
        let cfg = SweepConfig {
            n_values: vec![n],
            gamma: 1.0,
            c0_rule: C0Rule::Case1LowerMultiple { factor: 4.0 },
            replicates: 20,
            master_seed: 50 + i as u64,
            tol: None,
            tighten_budget: true,
            fixed_lambda: None,
            timing: false,
        };
        let out = run_sweep(&cfg, &series()).map_err(|e| e.to_string())?;
        let cell = &out.summary.cells[0];
        let target = c1 * c1 * n as f64 / (4.0 * cell.c0);
        let phi = cell.phi_star.ok_or("no phi statistics")?.mean / target;
        let w = cell.repaired_w.ok_or("no weight statistics")?.mean / target;
        trend.push(format!("n={n}: phi/pred {phi:.3}, W/pred {w:.3}"));
        if n == 1000 {
            at_1000 = Some((phi, w));
        }
    }
    let (phi, w) = at_1000.unwrap();
    let detail = trend.join("; ");
    check((phi - 1.0).abs() <= 0.2 && (w - 1.0).abs() <= 0.2, detail.clone())?;
    Ok(detail)
}

fn f_prime_decreasing() -> Outcome {
    let cfg = series();
    let m = 500;
    let (lo, hi) = (1e-3f64, 30f64);
    let mut prev = f64::INFINITY;
    for i in 0..m {
        let b = lo * (hi / lo).powf(i as f64 / (m - 1) as f64);
        let v = f_prime(b, &cfg).map_err(|e| e.to_string())?.value;
        check(v - prev < 0.0, format!("f' not decreasing at beta = {b}: {v} >= {prev}"))?;
        prev = v;
    }
    Ok(format!("500 grid points, f'(30) = {prev:.6}"))
}

fn monte_carlo(samples: usize, seed: u64, hit: impl Fn(f64, f64) -> bool) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0usize;
    for _ in 0..samples {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        if hit(u, v) {
            count += 1;
        }
    }
    let p = count as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

fn phat_geometry() -> Outcome {
    let mut worst = 0.0f64;
    for l in [0.01, 0.5, 1.0, 2.0, 100.0] {
        for i in 0..100 {
            let p = i as f64 / 99.0;
            let q = phat(p, l).map_err(|e| e.to_string())?;
            let back = phat_inv(q, l).map_err(|e| e.to_string())?;
            worst = worst.max((back - p).abs());
        }
    }
    check(worst <= 1e-12, format!("round trip error {worst:e}"))?;
    let l = 3.0;
    let want = phat(0.4, l).map_err(|e| e.to_string())?;
    let (est, se) = monte_carlo(10_000_000, 7, |u, v| u / (1.0 + l) + v / (1.0 + 1.0 / l) <= 0.4);
    let z = (est - want).abs() / se;
    check(z <= 4.0, format!("phat(0.4, 3) = {want:.6} vs MC {est:.6}, {z:.2} se"))?;
    Ok(format!("round trip max err {worst:.1e}; phat(0.4,3) = {want:.6}, MC {est:.6} ({z:.2} se)"))
}

fn gamma_formulas() -> Outcome {
    let cfg = series();
    let c1 = c1_const(&cfg).map_err(|e| e.to_string())?.value;
    let cg = c_gamma_const(1.0, &cfg).map_err(|e| e.to_string())?.value;
    check((cg - c1).abs() <= 1e-10, format!("C_1 - c1 = {:e}", cg - c1))?;
    for n in 1..=100usize {
        let m = expected_min_ugamma(n, 1.0).map_err(|e| e.to_string())?;
        check(m.exact == 1.0 / (n as f64 + 1.0), format!("E min at n = {n} is {}", m.exact))?;
    }
    let m = expected_min_ugamma(10_000, 0.5).map_err(|e| e.to_string())?;
    let ratio = m.exact / m.asymptotic;
    check((ratio - 1.0).abs() <= 1e-3, format!("exact/asymptotic = {ratio}"))?;
    let want = phat_gamma(0.8, 2.0, 0.5).map_err(|e| e.to_string())?;
    let (est, se) = monte_carlo(10_000_000, 8, |u, v| u.sqrt() + 2.0 * v.sqrt() < 0.8);
    let z = (est - want).abs() / se;
    check(z <= 4.0, format!("phat_gamma = {want:.6} vs MC {est:.6}, {z:.2} se"))?;
    Ok(format!(
        "C_1 - c1 = {:.1e}; ratio {ratio:.6}; phat_gamma(0.8,2,0.5) = {want:.6}, MC {est:.6} ({z:.2} se)",
        cg - c1
    ))
}

fn root_solvers() -> Outcome {
    let cfg = series();
    let b = solve_beta_case2(0.5, &cfg).map_err(|e| e.to_string())?;
    check(b.abs() <= 1e-8, format!("beta*(1/2) = {b}"))?;
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let a = 0.05 * i as f64;
        let b = solve_beta_case2(a, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((f_prime(b, &cfg).map_err(|e| e.to_string())?.value - 2.0 * a).abs());
    }
    for a in [1.25, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let b = solve_beta_case3(a, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((g(b, &cfg).map_err(|e| e.to_string())?.value - a).abs());
    }
    check(worst <= 1e-10, format!("max residual {worst:e}"))?;
    let z = zeta3(&cfg).map_err(|e| e.to_string())?.value;
    let n = 100_000;
    let p = predict_wstar(n, n as f64 / 2.0, 1.0, false, &cfg).map_err(|e| e.to_string())?;
    let w = p.w_star_predicted.ok_or("no prediction at alpha = 1/2")?;
    check((w - z).abs() <= 1e-6, format!("W*(alpha = 1/2) = {w} vs zeta3 {z}"))?;
    Ok(format!("max residual {worst:.1e}; W*(1/2) - zeta3 = {:.1e}", w - z))
}

fn concentration() -> Outcome {
    let (mean, cv) = mean_phi(&fixed_lambda_sweep(500, 1.0, 30, 101))?;
    check(cv <= 0.05, format!("CV {cv:.4}"))?;
    let e = expected_ln(500, 1.0, 1.0, &series()).map_err(|e| e.to_string())?.value;
    Ok(format!("CV of phi {cv:.4} (mean {mean:.3}, leading-order E L_n {e:.3})"))
}

fn determinism() -> Outcome {
    let cfg = SweepConfig {
        n_values: vec![30, 60, 100],
        gamma: 0.8,
        c0_rule: C0Rule::Alpha { alpha: 0.1 },
        replicates: 6,
        master_seed: 0xDEAD_BEEF,
        tol: None,
        tighten_budget: true,
        fixed_lambda: None,
        timing: false,
    };
    let csv = |threads| -> Result<Vec<u8>, String> {
        let out = run_sweep_with_threads(&cfg, &series(), threads).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let one = csv(1)?;
    let eight = csv(8)?;
    check(one == eight, "CSV differs between 1 and 8 threads".into())?;
    Ok(format!("{} bytes identical under 1 and 8 threads", one.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 oracle sandwich", Duration::from_secs(60), oracle_sandwich),
        ("2 unconstrained baseline", Duration::from_secs(60), unconstrained_baseline),
        ("3 E L_n mid regime", Duration::from_secs(120), mid_regime),
        ("4 E L_n small lambda", Duration::from_secs(120), small_lambda),
        ("5 case-1 prediction sandwich", Duration::from_secs(300), case1_sandwich),
        ("6 f' strictly decreasing", Duration::from_secs(60), f_prime_decreasing),
        ("7 phat geometry", Duration::from_secs(60), phat_geometry),
        ("8 gamma < 1 formulas", Duration::from_secs(60), gamma_formulas),
        ("9 root solvers", Duration::from_secs(60), root_solvers),
        ("10 concentration proxy", Duration::from_secs(120), concentration),
        ("11 determinism", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > budget => Err(format!("{d} (took {took:.1?}, budget {budget:?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{took:.1?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{took:.1?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
