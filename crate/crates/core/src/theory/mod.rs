//! Constants, series, roots and regime predictions for the constrained
//! random MST.

mod geometry;
mod predict;
mod roots;
mod series;
mod special;

pub use geometry::{phat, phat_gamma, phat_inv, t0_threshold, T0};
pub use predict::{
    expected_ln, expected_ln_formula, expected_min_ugamma, lambda_star, predict_wstar, LambdaRange,
    MinMoment, Regime, RegimePrediction,
};
pub use roots::{solve_beta_case2, solve_beta_case3};
pub use series::{c1_const, c_gamma_const, f, f_k, f_prime, g, zeta3, SeriesConfig, SeriesValue};
pub use special::{log_gamma, lower_incomplete_gamma, regularized_lower_gamma};
