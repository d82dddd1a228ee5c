//! Constants and the `f` family of series.
//!
//! Every series here has terms of size `k^{-3}` or `a_k ≈ k^{-3}`, where
//! `a_k = Γ(k-½) / (k^{3/2} k!)`. Tails are bracketed with
//! `Σ_{j>K} j^{-3} ∈ [1/(2(K+1)²), 1/(2K²)]` and the midpoint is added.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::special::{gamma_pq_fast, ln_gamma};
use crate::error::{invalid, Result};

/// Accuracy controls for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 1_000_000 }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(invalid(format!("rel_tol must lie in (0, 1e-3), got {}", self.rel_tol)));
        }
        if self.max_terms < 100 {
            return Err(invalid(format!("max_terms must be >= 100, got {}", self.max_terms)));
        }
        Ok(())
    }
}

/// A series value together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub abs_error_bound: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    fn scaled(self, s: f64) -> Self {
        Self { value: self.value * s, abs_error_bound: self.abs_error_bound * s.abs(), ..self }
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn get(&self) -> f64 {
        self.s + self.c
    }
}

fn cube_tail(k: usize) -> (f64, f64) {
    let k = k as f64;
    (0.5 / ((k + 1.0) * (k + 1.0)), 0.5 / (k * k))
}

/// Sums `Σ term(k)` where `k³ term(k)` decreases to 1. The error bound is
/// below `rel_tol` both relative to the sum and in absolute terms.
fn cubic_series(cfg: &SeriesConfig, term: impl Fn(usize) -> f64) -> SeriesValue {
    let mut sum = Sum::default();
    let mut k = 0;
    let mut last = 0.0;
    while k < cfg.max_terms {
        k += 1;
        last = term(k);
        sum.add(last);
        let (lo, hi) = cube_tail(k);
        let k3 = (k as f64).powi(3);
        let half = 0.5 * (hi * last * k3 - lo);
        let s = sum.get();
        if half + 4.0 * f64::EPSILON * s <= cfg.rel_tol * s.min(1.0) {
            break;
        }
    }
    let (lo, hi) = cube_tail(k);
    let k3 = (k as f64).powi(3);
    let (lo, hi) = (lo, hi * (last * k3).max(1.0));
    let s = sum.get();
    SeriesValue {
        value: s + 0.5 * (lo + hi),
        abs_error_bound: 0.5 * (hi - lo) + 4.0 * f64::EPSILON * s,
        terms_used: k,
    }
}

fn ln_a(k: usize, gamma: f64) -> f64 {
    // ln Γ(k+γ/2-1) - (γ/2+1) ln k - ln k!
    let kf = k as f64;
    ln_gamma(kf + 0.5 * gamma - 1.0) - (0.5 * gamma + 1.0) * kf.ln() - ln_gamma(kf + 1.0)
}

fn a_k(k: usize) -> f64 {
    ln_a(k, 1.0).exp()
}

/// `ζ(3) = Σ k^{-3}`.
pub fn zeta3(cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    Ok(cubic_series(cfg, |k| (k as f64).powi(-3)))
}

/// `c₁ = (1/√2) Σ Γ(k-½) / (k^{3/2} k!)`.
pub fn c1_const(cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    Ok(cubic_series(cfg, a_k).scaled(std::f64::consts::FRAC_1_SQRT_2))
}

/// `C_γ = (γ/2) Γ(2/γ+1)^{γ/2} / Γ(1/γ+1)^γ · Σ Γ(k+γ/2-1) / (k^{γ/2+1} k!)`.
pub fn c_gamma_const(gamma: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let pre = ((0.5 * gamma).ln() + 0.5 * gamma * ln_gamma(2.0 / gamma + 1.0)
        - gamma * ln_gamma(1.0 / gamma + 1.0))
    .exp();
    Ok(cubic_series(cfg, |k| ln_a(k, gamma).exp()).scaled(pre))
}

struct Limits {
    zeta3: f64,
    a0: f64,
    err: f64,
}

fn limits() -> &'static Limits {
    static CELL: OnceLock<Limits> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = SeriesConfig { rel_tol: 1e-15, max_terms: 1_000_000 };
        let z = cubic_series(&cfg, |k| (k as f64).powi(-3));
        let a = cubic_series(&cfg, a_k);
        Limits { zeta3: z.value, a0: a.value, err: z.abs_error_bound.max(a.abs_error_bound) }
    })
}

/// Evaluates the `k`-th series component
/// `f_k(β) = β^{1/2} ∫_0^β x^{k-3/2} e^{-kx} dx + ∫_β^∞ x^{k-1} e^{-kx} dx`.
pub fn f_k(k: usize, beta: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if k < 1 {
        return Err(invalid("k must be >= 1"));
    }
    check_beta(beta)?;
    let kf = k as f64;
    let (p, _) = gamma_pq_exact(kf - 0.5, kf * beta);
    let (_, q) = gamma_pq_exact(kf, kf * beta);
    let first = beta.sqrt() * (ln_gamma(kf - 0.5) - (kf - 0.5) * kf.ln()).exp() * p;
    let second = (ln_gamma(kf) - kf * kf.ln()).exp() * q;
    Ok(first + second)
}

fn gamma_pq_exact(s: f64, x: f64) -> (f64, f64) {
    super::special::gamma_pq(s, x)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be finite and >= 0, got {beta}")));
    }
    Ok(())
}

const SATURATED: f64 = 1e-17;

/// `f(β) = Σ k^{k-2}/k! · f_k(β)`.
pub fn f(beta: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    check_beta(beta)?;
    let lim = limits();
    let sb = beta.sqrt();
    let mut sum = Sum::default();
    let mut sum_a = Sum::default();
    let mut sum_z = Sum::default();
    let mut k = 0;
    loop {
        k += 1;
        let kf = k as f64;
        let a = a_k(k);
        let z = kf.powi(-3);
        let (p, pc) = gamma_pq_fast(kf - 0.5, kf * beta);
        let (qc, q) = gamma_pq_fast(kf, kf * beta);
        sum.add(sb * a * p + z * q);
        sum_a.add(a);
        sum_z.add(z);
        let a_tail = (lim.a0 - sum_a.get()).max(0.0);
        let z_tail = (lim.zeta3 - sum_z.get()).max(0.0);
        let s = sum.get();
        let rounding = 8.0 * f64::EPSILON * s + lim.err * sb.max(1.0);
        if beta > 1.0 && pc < SATURATED && q < SATURATED {
            let tail = sb * a_tail;
            return Ok(SeriesValue { value: s + tail, abs_error_bound: rounding, terms_used: k });
        }
        if beta < 1.0 && p < SATURATED && qc < SATURATED {
            return Ok(SeriesValue { value: s + z_tail, abs_error_bound: rounding, terms_used: k });
        }
        let lo = sb.min(1.0) * z_tail;
        let hi = sb.max(1.0) * a_tail * (1.0 + 1.0 / kf.sqrt());
        let half = 0.5 * (hi - lo).max(0.0);
        if half <= cfg.rel_tol * s || k >= cfg.max_terms {
            return Ok(SeriesValue {
                value: s + 0.5 * (lo + hi),
                abs_error_bound: half + rounding,
                terms_used: k,
            });
        }
    }
}

/// `f'(β) = (1/(2√β)) Σ a_k P(k-½, kβ)`, with `f'(0) = 1`.
pub fn f_prime(beta: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    cfg.validate()?;
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(SeriesValue { value: 1.0, abs_error_bound: 0.0, terms_used: 0 });
    }
    let lim = limits();
    let scale = 0.5 / beta.sqrt();
    let mut sum = Sum::default();
    let mut sum_a = Sum::default();
    let mut k = 0;
    loop {
        k += 1;
        let kf = k as f64;
        let a = a_k(k);
        let (p, pc) = gamma_pq_fast(kf - 0.5, kf * beta);
        sum.add(a * p);
        sum_a.add(a);
        let a_tail = (lim.a0 - sum_a.get()).max(0.0);
        let s = sum.get();
        let rounding = 8.0 * f64::EPSILON * s + lim.err;
        let done = |v: f64, e: f64| SeriesValue {
            value: v * scale,
            abs_error_bound: (e + rounding) * scale,
            terms_used: k,
        };
        if beta > 1.0 && pc < SATURATED {
            return Ok(done(s + a_tail, 0.0));
        }
        if beta < 1.0 && p < SATURATED {
            return Ok(done(s, 0.0));
        }
        let (lo, hi) = if beta >= 1.0 {
            (0.5 * a_tail, a_tail)
        } else {
            (0.0, (0.5 + 1.0 / kf.sqrt()) * a_tail)
        };
        let half = 0.5 * (hi - lo);
        if half <= cfg.rel_tol * s || k >= cfg.max_terms {
            return Ok(done(s + 0.5 * (lo + hi), half));
        }
    }
}

/// `g(β) = f(β) - β f'(β)`.
pub fn g(beta: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    let fv = f(beta, cfg)?;
    let dv = f_prime(beta, cfg)?;
    Ok(SeriesValue {
        value: fv.value - beta * dv.value,
        abs_error_bound: fv.abs_error_bound + beta * dv.abs_error_bound,
        terms_used: fv.terms_used.max(dv.terms_used),
    })
}
