//! Areas of the sublevel sets of `w + λc` and `u^γ + λv^γ` on the unit square.

use serde::Serialize;

use super::special::ln_gamma;
use crate::error::{invalid, Result};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(())
}

fn unit(x: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("{what} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

struct Shape {
    m: f64,
    big: f64,
    k: f64,
}

fn shape(lambda: f64) -> Shape {
    Shape {
        m: lambda.min(1.0 / lambda),
        big: lambda.max(1.0 / lambda),
        k: 0.5 * (1.0 + lambda) * (1.0 + 1.0 / lambda),
    }
}

/// Area of `{(u, v) ∈ [0,1]²: u/(1+λ) + v/(1+λ⁻¹) ≤ p}`.
pub fn phat(p: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    unit(p, "p")?;
    let s = shape(lambda);
    Ok(if p <= 1.0 / (1.0 + s.big) {
        s.k * p * p
    } else if p <= 1.0 / (1.0 + s.m) {
        p * (1.0 + s.m) - 0.5 * s.m
    } else {
        let r = 1.0 - p;
        1.0 - s.k * r * r
    })
}

/// Inverse of [`phat`] in `p`.
pub fn phat_inv(q: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    unit(q, "q")?;
    let s = shape(lambda);
    let b1 = phat(1.0 / (1.0 + s.big), lambda)?;
    let b2 = phat(1.0 / (1.0 + s.m), lambda)?;
    Ok(if q <= b1 {
        (q / s.k).sqrt()
    } else if q <= b2 {
        (q + 0.5 * s.m) / (1.0 + s.m)
    } else {
        1.0 - ((1.0 - q) / s.k).sqrt()
    })
}

fn gamma_ratio(gamma: f64) -> f64 {
    // Γ(1/γ+1)² / Γ(2/γ+1)
    (2.0 * ln_gamma(1.0 / gamma + 1.0) - ln_gamma(2.0 / gamma + 1.0)).exp()
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

/// Measure of `{u^γ + λ v^γ < t}` for `t ≤ 1`, `λ ≥ 1`.
pub fn phat_gamma(t: f64, lambda: f64, gamma: f64) -> Result<f64> {
    unit(t, "t")?;
    check_gamma(gamma)?;
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be >= 1, got {lambda}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(((2.0 / gamma) * t.ln() - lambda.ln() / gamma).exp() * gamma_ratio(gamma))
}

/// Threshold `t₀` with `phat_gamma(t₀) = 1000 ln n / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T0 {
    pub t0: f64,
    pub below_one: bool,
}

pub fn t0_threshold(n: usize, lambda: f64, gamma: f64) -> Result<T0> {
    check_gamma(gamma)?;
    if n < 2 {
        return Err(invalid("n must be >= 2"));
    }
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be >= 1, got {lambda}")));
    }
    let nf = n as f64;
    let t0 = lambda.sqrt() * (1000.0 * nf.ln() / nf / gamma_ratio(gamma)).powf(0.5 * gamma);
    Ok(T0 { t0, below_one: t0 <= 1.0 })
}
