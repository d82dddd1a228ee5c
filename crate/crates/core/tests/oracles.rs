//! Checks against oracles that share no code with the library paths they
//! test: exhaustive enumeration, Kirchhoff determinants, dense grids and
//! quadrature of the tree-function form of `f`.

use cmst_core::instances::{
    enumerate_spanning_trees, random_spanning_tree, sample_instance, SpanningTree,
};
use cmst_core::lagrange::{default_tol, maximize_dual, phi};
use cmst_core::theory::{
    c1_const, c_gamma_const, f, f_k, f_prime, g, log_gamma, lower_incomplete_gamma, zeta3,
    SeriesConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

fn simpson<F: Fn(f64) -> f64 + Copy>(h: F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64 + Copy>(h: F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (h(lm), h(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(h, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(h, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (h(a), h(b), h(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(h, a, b, fa, fm, fb, whole, tol, 50)
}

/// Root `τ ≤ 1` of `τ e^{-τ} = x e^{-x}`: the tree function at `x e^{-x}`.
fn tau(x: f64) -> f64 {
    if x <= 1.0 {
        return x;
    }
    let target = x.ln() - x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.ln() - mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `S(x) = Σ k^{k-2}/k! (x e^{-x})^k = τ - τ²/2`.
fn s(x: f64) -> f64 {
    let t = tau(x);
    t - 0.5 * t * t
}

/// `∫_0^β x^{-3/2} S(x) dx`, after `x = t²`.
fn inner(beta: f64) -> f64 {
    let h = |t: f64| if t == 0.0 { 2.0 } else { 2.0 * s(t * t) / (t * t) };
    let r = beta.sqrt();
    if r <= 1.0 {
        simpson(h, 0.0, r, 1e-15)
    } else {
        simpson(h, 0.0, 1.0, 1e-15) + simpson(h, 1.0, r, 1e-15)
    }
}

/// `∫_β^∞ S(x)/x dx`.
fn outer(beta: f64) -> f64 {
    let h = |x: f64| if x == 0.0 { 1.0 } else { s(x) / x };
    let mut total = 0.0;
    let mut a = beta;
    for b in [1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0] {
        if b > a {
            total += simpson(h, a, b, 1e-15);
            a = b;
        }
    }
    total
}

fn f_oracle(beta: f64) -> f64 {
    beta.sqrt() * inner(beta) + outer(beta)
}

#[test]
fn f_matches_tree_function_quadrature() {
    for beta in [0.0, 0.3, 1.0, 1.5, 3.0, 10.0, 50.0] {
        let want = f_oracle(beta);
        let got = f(beta, &cfg()).unwrap();
        assert!((got.value - want).abs() < 1e-9 * want, "beta {beta}: {} vs {want}", got.value);
    }
}

#[test]
fn f_prime_matches_quadrature() {
    for beta in [0.2, 1.0, 2.5, 7.0, 40.0] {
        let want = inner(beta) / (2.0 * beta.sqrt());
        let got = f_prime(beta, &cfg()).unwrap().value;
        assert!((got - want).abs() < 1e-9 * want, "beta {beta}: {got} vs {want}");
        let gv = g(beta, &cfg()).unwrap().value;
        assert!((gv - (f_oracle(beta) - beta * want)).abs() < 1e-8);
    }
}

#[test]
fn f_prime_matches_finite_difference() {
    for beta in [0.5, 2.0, 6.0] {
        let h = 1e-4;
        let fd = (f(beta + h, &cfg()).unwrap().value - f(beta - h, &cfg()).unwrap().value) / (2.0 * h);
        assert!((fd - f_prime(beta, &cfg()).unwrap().value).abs() < 1e-7);
    }
}

#[test]
fn c1_matches_integral_form() {
    // a0 = ∫_0^∞ x^{-3/2} S(x) dx and c1 = a0 / √2
    let a0 = inner(80.0 * 80.0);
    let c1 = c1_const(&cfg()).unwrap();
    assert!((c1.value - a0 / 2f64.sqrt()).abs() < 1e-9, "{} vs {}", c1.value, a0 / 2f64.sqrt());
    assert!(c1.abs_error_bound <= 1e-12 * c1.value);
    assert!((c1.value - 1.424_767_772).abs() < 1e-9);
}

#[test]
fn zeta3_matches_reference() {
    let z = zeta3(&cfg()).unwrap();
    assert!((z.value - 1.202_056_903_159_594_3).abs() < 1e-12);
    let mut partial = 0.0;
    for k in 1..=1000 {
        let next = partial + (k as f64).powi(-3);
        assert!(next > partial);
        partial = next;
    }
}

#[test]
fn c_gamma_half_matches_direct_sum() {
    let gamma = 0.5;
    let k_max = 2_000_000usize;
    let mut sum = 0.0;
    for k in (1..=k_max).rev() {
        let kf = k as f64;
        sum += (log_gamma(kf + 0.5 * gamma - 1.0).unwrap() - (0.5 * gamma + 1.0) * kf.ln() - log_gamma(kf + 1.0).unwrap()).exp();
    }
    sum += 0.5 / (k_max as f64 + 0.5).powi(2);
    let pre = (0.5 * gamma)
        * (log_gamma(2.0 / gamma + 1.0).unwrap() * 0.5 * gamma - gamma * log_gamma(1.0 / gamma + 1.0).unwrap()).exp();
    let got = c_gamma_const(gamma, &cfg()).unwrap().value;
    assert!((got - pre * sum).abs() < 1e-10 * got, "{got} vs {}", pre * sum);
}

#[test]
fn f2_at_one_matches_quadrature() {
    let first = simpson(|x: f64| x.sqrt() * (-2.0 * x).exp(), 0.0, 1.0, 1e-15);
    let second = simpson(|x: f64| x * (-2.0 * x).exp(), 1.0, 40.0, 1e-15);
    let got = f_k(2, 1.0, &cfg()).unwrap();
    assert!((got - (first + second)).abs() < 1e-10, "{got} vs {}", first + second);
}

#[test]
fn incomplete_gamma_matches_quadrature() {
    for (s, x) in [(0.7f64, 0.4f64), (2.5, 1.0), (3.0, 7.0), (12.5, 9.0)] {
        let q = if s < 1.0 {
            // t = u^{1/s} removes the endpoint singularity
            simpson(|u: f64| (-(u.powf(1.0 / s))).exp() / s, 0.0, f64::powf(x, s), 1e-15)
        } else {
            simpson(|t: f64| t.powf(s - 1.0) * (-t).exp(), 0.0, x, 1e-15)
        };
        let got = lower_incomplete_gamma(s, x).unwrap();
        assert!((got - q).abs() < 1e-11 * q.max(1.0), "s {s} x {x}: {got} vs {q}");
    }
}

fn laplacian_det(n: usize) -> f64 {
    // reduced Laplacian of K_n: (n-1) x (n-1), n-1 on the diagonal, -1 elsewhere
    let m = n - 1;
    let mut a: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { (n - 1) as f64 } else { -1.0 }).collect()).collect();
    let mut det = 1.0;
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        if p != c {
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..m {
            let k = a[r][c] / a[c][c];
            let pivot = a[c].clone();
            for (x, p) in a[r][c..m].iter_mut().zip(&pivot[c..m]) {
                *x -= k * p;
            }
        }
    }
    det
}

#[test]
fn enumeration_counts_match_kirchhoff() {
    for n in 3..=9usize {
        let count = enumerate_spanning_trees(n).unwrap().count();
        assert_eq!(count as f64, laplacian_det(n).round(), "n = {n}");
    }
}

#[test]
fn phi_matches_exhaustive_minimum() {
    for seed in 0..8u64 {
        let n = 4 + (seed % 3) as usize;
        let inst = sample_instance(n, 0.8, seed).unwrap();
        let trees: Vec<SpanningTree> = enumerate_spanning_trees(n)
            .unwrap()
            .map(|e| SpanningTree::from_edges(&inst, e).unwrap())
            .collect();
        let c0 = 1.0;
        for lambda in [0.0, 0.1, 0.7, 2.0, 9.0] {
            let want = trees.iter().map(|t| t.total_weight() + lambda * (t.total_cost() - c0)).fold(f64::INFINITY, f64::min);
            let got = phi(&inst, lambda, c0).unwrap().phi;
            assert!((got - want).abs() < 1e-12, "seed {seed} lambda {lambda}");
            // weak duality against every feasible tree
            for t in trees.iter().filter(|t| t.total_cost() <= c0) {
                assert!(got <= t.total_weight() + 1e-12);
            }
        }
    }
}

#[test]
fn maximize_dual_matches_dense_grid() {
    let inst = sample_instance(20, 1.0, 12).unwrap();
    let c0 = 2.0;
    let sol = maximize_dual(&inst, c0, default_tol(20)).unwrap();
    let hi = 4.0 * sol.lambda_star.max(1.0);
    let m = 100_000;
    let step = hi / m as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=m {
        best = best.max(phi(&inst, i as f64 * step, c0).unwrap().phi);
    }
    // slope of phi is bounded by |C(T) - c0| <= n
    assert!(best <= sol.phi_star + 1e-12, "{best} > {}", sol.phi_star);
    assert!(sol.phi_star - best <= 20.0 * step);
}

#[test]
fn random_feasible_trees_never_beat_the_dual() {
    let inst = sample_instance(15, 1.0, 8).unwrap();
    let c0 = 6.5;
    let sol = maximize_dual(&inst, c0, default_tol(15)).unwrap();
    assert!(sol.lambda_star > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut feasible = 0;
    for _ in 0..1000 {
        let t = SpanningTree::from_edges(&inst, random_spanning_tree(15, &mut rng)).unwrap();
        assert!(t.lagrangian(sol.lambda_star) - sol.lambda_star * c0 >= sol.phi_star - 1e-12);
        if t.total_cost() <= c0 {
            feasible += 1;
            assert!(t.total_weight() >= sol.phi_star - 1e-12);
        }
    }
    assert!(feasible > 0);
}
