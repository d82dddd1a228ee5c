//! Lagrangian dual of the budgeted MST and exchange repair of the dual trees.
//!
//! For a multiplier `lambda >= 0` the dual function is
//! `phi(lambda) = min_T W(T) + lambda (C(T) - c0)`, a minimum of affine
//! functions and therefore concave and piecewise linear. Its supergradient at
//! `lambda` is the slack `C(T_lambda) - c0` of any minimising tree.

mod dual;
mod repair;

pub use dual::{default_tol, maximize_dual, phi, DualPoint, DualSolution, TreeSummary};
pub use repair::{gr_repair, solve_with_tightening, tree_edge_maxima, TightenedSolve};
