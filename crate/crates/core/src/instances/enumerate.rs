use rand::Rng;

use super::tree::Edge;
use super::{Instance, SpanningTree};
use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by the exhaustive routines (`9^7` trees).
pub const MAX_ENUMERATION_N: usize = 9;

/// Decodes a Prüfer sequence of length `n - 2` into the edges of a labelled
/// tree on `n` vertices, sorted lexicographically.
pub fn decode_pruefer(n: usize, seq: &[usize]) -> Vec<Edge> {
    debug_assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push(Edge::new(leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let mut last = (0..n).filter(|&v| degree[v] == 1);
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push(Edge::new(a, b));
    edges.sort_unstable();
    edges
}

/// Iterator over every labelled spanning tree of `K_n`, via Prüfer sequences.
pub struct SpanningTrees {
    n: usize,
    seq: Vec<usize>,
    done: bool,
}

impl Iterator for SpanningTrees {
    type Item = Vec<Edge>;

    fn next(&mut self) -> Option<Vec<Edge>> {
        if self.done {
            return None;
        }
        let edges = decode_pruefer(self.n, &self.seq);
        // odometer increment
        let mut i = self.seq.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.seq[i] += 1;
            if self.seq[i] < self.n {
                break;
            }
            self.seq[i] = 0;
        }
        Some(edges)
    }
}

pub fn enumerate_spanning_trees(n: usize) -> Result<SpanningTrees> {
    if n < 2 {
        return Err(invalid(format!("n must be at least 2, got {n}")));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(SpanningTrees {
        n,
        seq: vec![0; n - 2],
        done: false,
    })
}

/// Uniformly random labelled spanning tree of `K_n`.
pub fn random_spanning_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Edge> {
    assert!(n >= 2);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    decode_pruefer(n, &seq)
}

/// Ground-truth constrained optimum: the tree of least weight among those with
/// `C(T) <= c0`, found by full enumeration. `None` when no tree is feasible.
/// Ties keep the first tree in enumeration order.
pub fn exact_constrained_mst(inst: &Instance, c0: f64) -> Result<Option<SpanningTree>> {
    let n = inst.n();
    if !(c0 >= 0.0) {
        return Err(invalid(format!("budget must be non-negative, got {c0}")));
    }
    let mut best: Option<(f64, Vec<Edge>)> = None;
    for edges in enumerate_spanning_trees(n)? {
        let cost: f64 = edges.iter().map(|e| e.cost(inst)).sum();
        if cost > c0 {
            continue;
        }
        let weight: f64 = edges.iter().map(|e| e.weight(inst)).sum();
        if best.as_ref().is_none_or(|(w, _)| weight < *w) {
            best = Some((weight, edges));
        }
    }
    Ok(best.map(|(_, edges)| SpanningTree::new_unchecked(inst, edges)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{mst, sample_instance};
    use std::collections::HashSet;

    #[test]
    fn cayley_counts_small() {
        assert_eq!(enumerate_spanning_trees(2).unwrap().count(), 1);
        assert_eq!(enumerate_spanning_trees(3).unwrap().count(), 3);
        assert_eq!(enumerate_spanning_trees(4).unwrap().count(), 16);
    }

    #[test]
    fn trees_are_distinct() {
        let all: HashSet<Vec<Edge>> = enumerate_spanning_trees(6).unwrap().collect();
        assert_eq!(all.len(), 6usize.pow(4));
    }

    #[test]
    fn rejects_out_of_range_n() {
        assert!(matches!(
            enumerate_spanning_trees(10),
            Err(Error::TooLarge { n: 10, .. })
        ));
        assert!(enumerate_spanning_trees(1).is_err());
        let inst = sample_instance(10, 1.0, 0).unwrap();
        assert!(exact_constrained_mst(&inst, 5.0).is_err());
    }

    #[test]
    fn generous_budget_gives_plain_mst() {
        for seed in 0..10 {
            let inst = sample_instance(6, 1.0, seed).unwrap();
            let exact = exact_constrained_mst(&inst, 5.0).unwrap().unwrap();
            let plain = mst(&inst, |u, v| inst.weight(u, v));
            assert!((exact.total_weight() - plain.total_weight()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_budget_is_infeasible() {
        let inst = sample_instance(5, 1.0, 4).unwrap();
        assert!(exact_constrained_mst(&inst, 0.0).unwrap().is_none());
    }

    #[test]
    fn median_budget_matches_filtered_enumeration() {
        let inst = sample_instance(6, 1.0, 31).unwrap();
        let mut all: Vec<(f64, f64)> = enumerate_spanning_trees(6)
            .unwrap()
            .map(|t| {
                (
                    t.iter().map(|e| e.weight(&inst)).sum(),
                    t.iter().map(|e| e.cost(&inst)).sum(),
                )
            })
            .collect();
        let mut costs: Vec<f64> = all.iter().map(|x| x.1).collect();
        costs.sort_by(f64::total_cmp);
        let c0 = costs[costs.len() / 2];
        all.retain(|x| x.1 <= c0);
        let want = all.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
        let got = exact_constrained_mst(&inst, c0).unwrap().unwrap();
        assert_eq!(got.total_weight(), want);
        assert!(got.total_cost() <= c0);
    }
}
