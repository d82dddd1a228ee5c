use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{invalid, Result};

/// Undirected edge `{u, v}` stored with `u < v`. The derived ordering is the
/// lexicographic order, which coincides with the canonical edge index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn weight(&self, inst: &Instance) -> f64 {
        inst.weight(self.0, self.1)
    }

    pub fn cost(&self, inst: &Instance) -> f64 {
        inst.cost(self.0, self.1)
    }
}

/// Spanning tree with cached totals `W(T)` and `C(T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    edges: Vec<Edge>,
    total_weight: f64,
    total_cost: f64,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree of `inst` and caches totals.
    pub fn from_edges(inst: &Instance, edges: Vec<Edge>) -> Result<Self> {
        let n = inst.n();
        if edges.len() != n - 1 {
            return Err(invalid(format!(
                "a spanning tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut dsu = Dsu::new(n);
        for e in &edges {
            let e = Edge::new(e.0, e.1);
            if e.1 >= n || e.0 == e.1 {
                return Err(invalid(format!("edge {e:?} is not an edge of K_{n}")));
            }
            if !dsu.union(e.0, e.1) {
                return Err(invalid(format!("edge {e:?} closes a cycle")));
            }
        }
        Ok(Self::new_unchecked(inst, edges))
    }

    pub(crate) fn new_unchecked(inst: &Instance, edges: Vec<Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.0, e.1)).collect();
        edges.sort_unstable();
        let total_weight = edges.iter().map(|e| e.weight(inst)).sum();
        let total_cost = edges.iter().map(|e| e.cost(inst)).sum();
        SpanningTree {
            edges,
            total_weight,
            total_cost,
        }
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// `W(T) + lambda * C(T)`.
    pub fn lagrangian(&self, lambda: f64) -> f64 {
        self.total_weight + lambda * self.total_cost
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Largest edge cost on the tree.
    pub fn max_cost(&self, inst: &Instance) -> f64 {
        self.edges
            .iter()
            .map(|e| e.cost(inst))
            .fold(0.0, f64::max)
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Minimum spanning tree of `K_n` under `edge_value`, by dense Prim in
/// `O(n^2)`. Edges are compared by `(value, edge)`, so among equal values the
/// lexicographically smaller edge wins and the result is the unique minimum
/// under that total order.
pub fn mst<F>(inst: &Instance, edge_value: F) -> SpanningTree
where
    F: Fn(usize, usize) -> f64,
{
    let n = inst.n();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n - 1);

    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let x = edge_value(current, v);
            if x < best[v] || (x == best[v] && Edge::new(current, v) < Edge::new(from[v], v)) {
                best[v] = x;
                from[v] = current;
            }
        }
        let mut next = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if next == usize::MAX
                || best[v] < best[next]
                || (best[v] == best[next] && Edge::new(from[v], v) < Edge::new(from[next], next))
            {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push(Edge::new(from[next], next));
        current = next;
    }
    SpanningTree::new_unchecked(inst, edges)
}

/// MST under `W_e + lambda * C_e`, scanning matrix rows directly.
pub(crate) fn lagrangian_mst(inst: &Instance, lambda: f64) -> SpanningTree {
    let n = inst.n();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n - 1);

    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let wrow = inst.weight_row(current);
        let crow = inst.cost_row(current);
        let mut next = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let x = wrow[v] + lambda * crow[v];
            if x < best[v] || (x == best[v] && Edge::new(current, v) < Edge::new(from[v], v)) {
                best[v] = x;
                from[v] = current;
            }
            if next == usize::MAX
                || best[v] < best[next]
                || (best[v] == best[next] && Edge::new(from[v], v) < Edge::new(from[next], next))
            {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push(Edge::new(from[next], next));
        current = next;
    }
    SpanningTree::new_unchecked(inst, edges)
}
