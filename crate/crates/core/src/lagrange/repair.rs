use super::dual::{maximize_dual, DualSolution};
use crate::error::{Error, Result};
use crate::instances::{Edge, Instance, SpanningTree};

/// `(z_max, c_max)`: the largest `W_e + lambda C_e` and the largest `C_e`
/// over the edges of `tree`.
pub fn tree_edge_maxima(tree: &SpanningTree, inst: &Instance, lambda: f64) -> (f64, f64) {
    tree.edges().iter().fold((0.0f64, 0.0f64), |(z, c), e| {
        (
            z.max(e.weight(inst) + lambda * e.cost(inst)),
            c.max(e.cost(inst)),
        )
    })
}

/// Walks from the positive-slack dual tree towards the non-positive-slack one
/// by single edge exchanges and returns the first tree `T` with
/// `C(T) <= c0 + max_{e in T} C_e`.
///
/// Each step removes an edge `e` of the current tree that is not in
/// `tree_plus` and inserts an edge `f` of `tree_plus` that reconnects the two
/// sides, choosing the pair with the smallest increase of
/// `W + lambda_star C`. Both end trees are Lagrangian-optimal at the
/// breakpoint, so a zero-increase exchange always exists and every tree on
/// the walk stays optimal. Since the walk is stopped as soon as the cost
/// condition holds, the returned tree also has `C(T) >= c0`, which gives
/// `W(T) <= phi(lambda_star)`.
pub fn gr_repair(inst: &Instance, c0: f64, dual: &DualSolution) -> Result<SpanningTree> {
    let minus = match &dual.tree_minus {
        Some(t) if dual.lambda_star > 0.0 => t,
        _ => return Ok(dual.tree_plus.clone()),
    };
    let n = inst.n();
    let lambda = dual.lambda_star;
    let target = &dual.tree_plus;
    let z = |e: &Edge| e.weight(inst) + lambda * e.cost(inst);

    let mut current = minus.clone();
    for _ in 0..n {
        if current.total_cost() <= c0 + current.max_cost(inst) {
            return Ok(current);
        }
        let removable: Vec<Edge> = current
            .edges()
            .iter()
            .copied()
            .filter(|e| !target.contains(*e))
            .collect();
        let insertable: Vec<Edge> = target
            .edges()
            .iter()
            .copied()
            .filter(|f| !current.contains(*f))
            .collect();
        if removable.is_empty() {
            break;
        }

        let adjacency = adjacency(n, current.edges());
        let mut best: Option<(f64, Edge, Edge)> = None;
        for &e in &removable {
            let side = side_of(n, &adjacency, e);
            for &f in &insertable {
                if side[f.0] == side[f.1] {
                    continue;
                }
                let delta = z(&f) - z(&e);
                if best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, e, f));
                }
            }
        }
        let (_, out, inn) = best.ok_or(Error::RepairExhausted)?;
        let mut edges: Vec<Edge> = current
            .edges()
            .iter()
            .copied()
            .filter(|e| *e != out)
            .collect();
        edges.push(inn);
        current = SpanningTree::new_unchecked(inst, edges);
    }
    if current.total_cost() <= c0 + current.max_cost(inst) {
        Ok(current)
    } else {
        Err(Error::RepairExhausted)
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    adj
}

/// Marks the vertices on the `removed.0` side of the tree once `removed` is cut.
fn side_of(n: usize, adj: &[Vec<usize>], removed: Edge) -> Vec<bool> {
    let mut mark = vec![false; n];
    let mut stack = vec![removed.0];
    mark[removed.0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if mark[v] || Edge::new(u, v) == removed {
                continue;
            }
            mark[v] = true;
            stack.push(v);
        }
    }
    mark
}

/// Outcome of solving once at `c0` and again at the tightened budget
/// `c0 - c_max`, where `c_max` is the largest edge cost of the first repair.
#[derive(Clone, Debug)]
pub struct TightenedSolve {
    pub original: DualSolution,
    /// Budget of the second solve.
    pub c0_hat: f64,
    /// Second solve; `None` when `c0_hat` is not positive or is infeasible.
    pub tightened: Option<DualSolution>,
}

impl TightenedSolve {
    /// The tree the pipeline reports: the tightened repair when available.
    pub fn final_tree(&self) -> &SpanningTree {
        self.tightened
            .as_ref()
            .map_or(&self.original.repaired, |s| &s.repaired)
    }

    pub fn final_solution(&self) -> &DualSolution {
        self.tightened.as_ref().unwrap_or(&self.original)
    }
}

/// Solves at `c0`, then re-solves at `c0 - c_max(T0)` so that the repaired
/// tree of the second pass usually fits the original budget.
pub fn solve_with_tightening(inst: &Instance, c0: f64, tol: f64) -> Result<TightenedSolve> {
    let original = maximize_dual(inst, c0, tol)?;
    if original.lambda_star == 0.0 {
        return Ok(TightenedSolve {
            c0_hat: c0,
            tightened: None,
            original,
        });
    }
    let c0_hat = c0 - original.repaired.max_cost(inst);
    let tightened = if c0_hat > 0.0 {
        match maximize_dual(inst, c0_hat, tol) {
            Ok(s) => Some(s),
            Err(Error::Infeasible { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(TightenedSolve {
        original,
        c0_hat,
        tightened,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sample_instance;
    use crate::lagrange::default_tol;

    #[test]
    fn zero_multiplier_returns_tree_plus() {
        let inst = sample_instance(10, 1.0, 2).unwrap();
        let sol = maximize_dual(&inst, 9.0, 1e-9).unwrap();
        assert_eq!(gr_repair(&inst, 9.0, &sol).unwrap(), sol.tree_plus);
    }

    #[test]
    fn single_exchange_toy() {
        // K_3: the cheap-weight tree {01, 02} is costly, {01, 12} is cheap.
        let inst =
            Instance::from_upper(3, 1.0, 0, &[0.1, 0.2, 0.6], &[0.5, 0.9, 0.1]).unwrap();
        let c0 = 0.8;
        let sol = maximize_dual(&inst, c0, 1e-12).unwrap();
        let minus = sol.tree_minus.as_ref().unwrap();
        let diff = minus
            .edges()
            .iter()
            .filter(|e| !sol.tree_plus.contains(**e))
            .count();
        assert_eq!(diff, 1);
        let t = &sol.repaired;
        let cmax = t.max_cost(&inst);
        assert!(t.total_cost() <= c0 + cmax);
        assert!(t.total_weight() <= sol.phi_star + 1e-12);
    }

    #[test]
    fn repaired_tree_meets_both_bounds() {
        for seed in 0..40 {
            let inst = sample_instance(30, 1.0, seed).unwrap();
            for c0 in [2.0, 4.0, 8.0] {
                let sol = maximize_dual(&inst, c0, default_tol(30)).unwrap();
                let t = &sol.repaired;
                let (_, cmax) = tree_edge_maxima(t, &inst, sol.lambda_star);
                assert!(t.total_cost() <= c0 + cmax + 1e-12);
                assert!(t.total_weight() <= sol.phi_star + sol.tol * (1.0 + sol.lambda_star));
            }
        }
    }

    #[test]
    fn edge_maxima_of_single_edge() {
        let inst = sample_instance(2, 1.0, 9).unwrap();
        let t = SpanningTree::from_edges(&inst, vec![Edge(0, 1)]).unwrap();
        let (z, c) = tree_edge_maxima(&t, &inst, 0.0);
        assert_eq!(z, inst.weight(0, 1));
        assert_eq!(c, inst.cost(0, 1));
        let (z, _) = tree_edge_maxima(&t, &inst, 2.0);
        assert_eq!(z, inst.weight(0, 1) + 2.0 * inst.cost(0, 1));
    }

    #[test]
    fn tightening_usually_restores_feasibility() {
        let mut feasible = 0;
        for seed in 0..30 {
            let inst = sample_instance(40, 1.0, seed).unwrap();
            let out = solve_with_tightening(&inst, 6.0, default_tol(40)).unwrap();
            let t = out.final_tree();
            assert!(t.total_cost() <= 6.0 + t.max_cost(&inst) + 1e-12);
            if t.total_cost() <= 6.0 {
                feasible += 1;
            }
        }
        assert!(feasible >= 27, "only {feasible}/30 feasible");
    }
}
