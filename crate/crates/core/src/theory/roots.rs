//! Roots of `f'(β) = 2α` and `g(β) = α` by bisection.

use super::series::{f_prime, g, zeta3, SeriesConfig};
use crate::error::{invalid, Result};

const RESIDUAL: f64 = 1e-10;

/// Bisection for an increasing `h` with `h(lo) < 0 < h(hi)` found by doubling from `[0, 1]`.
fn bisect(h: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    while h(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            return Err(invalid("root bracket exceeded 1e15"));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let v = h(mid)?;
        if v.abs() <= 0.1 * RESIDUAL {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (h(lo)?, h(hi)?);
    Ok(if a.abs() <= b.abs() { lo } else { hi })
}

/// `β*` with `f'(β*) = 2α`, for `0 < α ≤ ½`.
pub fn solve_beta_case2(alpha: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(invalid(format!("alpha must lie in (0, 1/2], got {alpha}")));
    }
    if alpha == 0.5 {
        return Ok(0.0);
    }
    bisect(|b| Ok(2.0 * alpha - f_prime(b, cfg)?.value))
}

/// `β*` with `g(β*) = α`, for `α > ζ(3)`.
pub fn solve_beta_case3(alpha: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    let z = zeta3(cfg)?.value;
    if !(alpha > z && alpha.is_finite()) {
        return Err(invalid(format!("alpha must exceed zeta(3) = {z}, got {alpha}")));
    }
    bisect(|b| Ok(g(b, cfg)?.value - alpha))
}
