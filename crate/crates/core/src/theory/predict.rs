//! Regime classification, predicted optima and expected Lagrangian MST length.

use serde::{Deserialize, Serialize};

use super::series::{c1_const, c_gamma_const, f, zeta3, SeriesConfig, SeriesValue};
use super::roots::{solve_beta_case2, solve_beta_case3};
use super::special::ln_gamma;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Case1,
    Case2Supercritical,
    Case2,
    Case3Infeasible,
    Case3,
    GammaRegime,
    OutOfRange,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Case1 => "case1",
            Regime::Case2Supercritical => "case2_supercritical",
            Regime::Case2 => "case2",
            Regime::Case3Infeasible => "case3_infeasible",
            Regime::Case3 => "case3",
            Regime::GammaRegime => "gamma_regime",
            Regime::OutOfRange => "out_of_range",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub w_star_predicted: Option<f64>,
    pub beta_star: Option<f64>,
    pub lambda_star: Option<f64>,
    pub alpha: Option<f64>,
    /// True when the prediction comes from the nearest regime's formula
    /// outside that regime's range.
    #[serde(default)]
    pub extrapolated: bool,
}

impl RegimePrediction {
    fn none(regime: Regime, alpha: Option<f64>) -> Self {
        Self { regime, w_star_predicted: None, beta_star: None, lambda_star: None, alpha, extrapolated: false }
    }
}

fn check_common(n: usize, gamma: f64) -> Result<()> {
    if n < 3 {
        return Err(invalid(format!("n must be >= 3, got {n}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

/// `Γ(1/γ+1)² / Γ(2/γ+1)`.
fn shape_ratio(gamma: f64) -> f64 {
    (2.0 * ln_gamma(1.0 / gamma + 1.0) - ln_gamma(2.0 / gamma + 1.0)).exp()
}

/// Range of `λ` on which the `γ < 1` square-root law holds.
fn gamma_lambda_range(n: usize, gamma: f64) -> (f64, f64) {
    let nf = n as f64;
    let r = 1000.0 * nf.ln() / nf;
    let s = shape_ratio(gamma);
    ((r / s).powf(gamma), (s / r).powf(gamma))
}

/// Leading-order dual maximizer `λ* = (n^{1-γ/2} C_γ / (2 c0))²`.
pub fn lambda_star(n: usize, c0: f64, gamma: f64, cfg: &SeriesConfig) -> Result<f64> {
    check_common(n, gamma)?;
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(invalid(format!("c0 must be > 0, got {c0}")));
    }
    let cg = c_gamma_const(gamma, cfg)?.value;
    let x = (n as f64).powf(1.0 - 0.5 * gamma) * cg / (2.0 * c0);
    Ok(x * x)
}

/// Predicted optimum `W*` and the regime it comes from.
pub fn predict_wstar(
    n: usize,
    c0: f64,
    gamma: f64,
    extrapolate: bool,
    cfg: &SeriesConfig,
) -> Result<RegimePrediction> {
    check_common(n, gamma)?;
    cfg.validate()?;
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(invalid(format!("c0 must be > 0, got {c0}")));
    }
    let nf = n as f64;
    if gamma < 1.0 {
        let lam = lambda_star(n, c0, gamma, cfg)?;
        let (lo, hi) = gamma_lambda_range(n, gamma);
        let inside = lam >= lo && lam <= hi;
        if !inside && !extrapolate {
            return Ok(RegimePrediction::none(Regime::OutOfRange, None));
        }
        let cg = c_gamma_const(gamma, cfg)?.value;
        return Ok(RegimePrediction {
            regime: Regime::GammaRegime,
            w_star_predicted: Some(cg * cg * nf.powf(2.0 - gamma) / (4.0 * c0)),
            beta_star: None,
            lambda_star: Some(lam),
            alpha: None,
            extrapolated: !inside,
        });
    }

    let c1 = c1_const(cfg)?.value;
    let ln = nf.ln();
    let lower = c1 * (500.0 * ln).sqrt();
    let upper = c1 * nf / (8000.0 * ln).sqrt();
    let beta_cap = 1000.0 * ln;

    if c0 >= lower && c0 <= upper {
        return Ok(RegimePrediction {
            regime: Regime::Case1,
            w_star_predicted: Some(c1 * c1 * nf / (4.0 * c0)),
            beta_star: None,
            lambda_star: Some(c1 * c1 * nf / (4.0 * c0 * c0)),
            alpha: None,
            extrapolated: false,
        });
    }
    if c0 > upper {
        let alpha = c0 / nf;
        if alpha > 0.5 {
            return Ok(RegimePrediction {
                regime: Regime::Case2Supercritical,
                w_star_predicted: Some(zeta3(cfg)?.value),
                beta_star: None,
                lambda_star: Some(0.0),
                alpha: Some(alpha),
                extrapolated: false,
            });
        }
        let beta = solve_beta_case2(alpha, cfg)?;
        let inside = beta < beta_cap;
        if !inside && !extrapolate {
            return Ok(RegimePrediction::none(Regime::OutOfRange, Some(alpha)));
        }
        return Ok(RegimePrediction {
            regime: Regime::Case2,
            w_star_predicted: Some(f(beta, cfg)?.value - 2.0 * alpha * beta),
            beta_star: Some(beta),
            lambda_star: Some(2.0 * beta / nf),
            alpha: Some(alpha),
            extrapolated: !inside,
        });
    }

    let alpha = c0;
    let z = zeta3(cfg)?.value;
    if alpha < z {
        return Ok(RegimePrediction::none(Regime::Case3Infeasible, Some(alpha)));
    }
    if alpha == z {
        return Ok(RegimePrediction::none(Regime::OutOfRange, Some(alpha)));
    }
    let beta = solve_beta_case3(alpha, cfg)?;
    let inside = beta < beta_cap;
    if !inside && !extrapolate {
        return Ok(RegimePrediction::none(Regime::OutOfRange, Some(alpha)));
    }
    Ok(RegimePrediction {
        regime: Regime::Case3,
        w_star_predicted: Some((f(beta, cfg)?.value - alpha) / (2.0 * beta) * nf),
        beta_star: Some(beta),
        lambda_star: Some(nf / (2.0 * beta)),
        alpha: Some(alpha),
        extrapolated: !inside,
    })
}

/// Which of the three `γ = 1` formulas for `E L_n` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaRange {
    /// `λ < 2000 ln n / n`: `f(λn/2)`.
    Small,
    /// Square-root law `c₁ √(λn)`.
    Mid,
    /// `λ > n / (2000 ln n)`: `λ f(n/(2λ))`.
    Large,
}

impl LambdaRange {
    pub fn classify(n: usize, lambda: f64) -> Self {
        let nf = n as f64;
        let ln = nf.ln();
        if lambda < 2000.0 * ln / nf {
            LambdaRange::Small
        } else if lambda <= nf / (2000.0 * ln) {
            LambdaRange::Mid
        } else {
            LambdaRange::Large
        }
    }
}

/// Evaluates one particular `γ = 1` formula for `E L_n`, regardless of range.
pub fn expected_ln_formula(
    range: LambdaRange,
    n: usize,
    lambda: f64,
    cfg: &SeriesConfig,
) -> Result<SeriesValue> {
    check_common(n, 1.0)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let nf = n as f64;
    match range {
        LambdaRange::Small => f(0.5 * lambda * nf, cfg),
        LambdaRange::Mid => {
            let c1 = c1_const(cfg)?;
            let s = (lambda * nf).sqrt();
            Ok(SeriesValue { value: c1.value * s, abs_error_bound: c1.abs_error_bound * s, ..c1 })
        }
        LambdaRange::Large => {
            if lambda == 0.0 {
                return Err(invalid("large-lambda formula needs lambda > 0"));
            }
            let v = f(nf / (2.0 * lambda), cfg)?;
            Ok(SeriesValue {
                value: lambda * v.value,
                abs_error_bound: lambda * v.abs_error_bound,
                ..v
            })
        }
    }
}

/// Leading-order `E L_n(λ)`, the expected MST length under `w + λc`.
pub fn expected_ln(n: usize, lambda: f64, gamma: f64, cfg: &SeriesConfig) -> Result<SeriesValue> {
    check_common(n, gamma)?;
    cfg.validate()?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    if gamma == 1.0 {
        return expected_ln_formula(LambdaRange::classify(n, lambda), n, lambda, cfg);
    }
    let (lo, hi) = gamma_lambda_range(n, gamma);
    if lambda < lo || lambda > hi {
        return Err(Error::NoPrediction(format!(
            "lambda = {lambda} outside [{lo:.6e}, {hi:.6e}] for gamma = {gamma}, n = {n}"
        )));
    }
    let cg = c_gamma_const(gamma, cfg)?;
    let s = lambda.sqrt() * (n as f64).powf(1.0 - 0.5 * gamma);
    Ok(SeriesValue { value: cg.value * s, abs_error_bound: cg.abs_error_bound * s, ..cg })
}

/// `E min(U_1^γ, ..., U_n^γ)`, exact and asymptotic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinMoment {
    pub exact: f64,
    pub asymptotic: f64,
}

pub fn expected_min_ugamma(n: usize, gamma: f64) -> Result<MinMoment> {
    if n < 1 {
        return Err(invalid("n must be >= 1"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let nf = n as f64;
    let exact = if gamma == 1.0 {
        1.0 / (nf + 1.0)
    } else {
        (ln_gamma(nf + 1.0) + ln_gamma(gamma + 1.0) - ln_gamma(nf + gamma + 1.0)).exp()
    };
    let asymptotic = (ln_gamma(gamma + 1.0) - gamma * nf.ln()).exp();
    Ok(MinMoment { exact, asymptotic })
}
